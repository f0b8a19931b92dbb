// Independent reference implementations used only by tests. Everything here is
// deliberately naive (dense int arithmetic, exhaustive enumeration) so that it
// shares no code or algorithmic shortcuts with the library under test.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

using DenseMatrix = std::vector<std::vector<int>>;
using DenseVector = std::vector<int>;

inline DenseVector syndrome(const DenseMatrix& h, const DenseVector& e) {
    DenseVector s(h.size(), 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < e.size(); ++j) acc += h[i][j] * e[j];
        s[i] = acc % 2;
    }
    return s;
}

inline std::size_t rank(DenseMatrix m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[r], m[pivot]);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (i != r && m[i][c] == 1)
                for (std::size_t j = 0; j < cols; ++j) m[i][j] = (m[i][j] + m[r][j]) % 2;
        ++r;
    }
    return r;
}

// Membership by enumerating all 2^rows row combinations; rows must be small.
inline bool in_row_space(const DenseMatrix& h, const DenseVector& v) {
    if (h.size() > 20) throw std::invalid_argument("in_row_space oracle: too many rows");
    const std::size_t n = v.size();
    for (std::uint64_t mask = 0; mask < (1ULL << h.size()); ++mask) {
        DenseVector acc(n, 0);
        for (std::size_t i = 0; i < h.size(); ++i)
            if (mask & (1ULL << i))
                for (std::size_t j = 0; j < n; ++j) acc[j] ^= h[i][j];
        if (acc == v) return true;
    }
    return false;
}

// Exhaustive subset enumeration. Sums each candidate subset in index order so
// that floating-point addition order matches the library's streaming rule.
inline double spc_max(const std::vector<double>& v, bool odd) {
    if (v.size() > 24) throw std::invalid_argument("spc_max oracle: vector too long");
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ULL << v.size()); ++mask) {
        if ((static_cast<unsigned>(__builtin_popcountll(mask)) % 2 != 0) != odd) continue;
        double sum = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (mask & (1ULL << j)) sum += v[j];
        if (!found || sum > best) {
            best = sum;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("spc_max oracle: no subset with requested parity");
    return best;
}

// Direct per-edge evaluation of the syndrome-keyed min-sum check update:
// u_j = sf(s) * prod_{j' != j} sgn(v_{j'}) * min_{j' != j} |v_{j'}|, with
// sgn(0) = -1 and sf(0) = +1, sf(1) = -1. O(d^2) on purpose.
inline std::vector<double> cn_update(const std::vector<double>& v, int s) {
    const double sf = (s == 0) ? 1.0 : -1.0;
    std::vector<double> u(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        double sign = sf;
        double mag = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k == j) continue;
            sign *= (v[k] > 0.0) ? 1.0 : -1.0;
            const double a = v[k] < 0.0 ? -v[k] : v[k];
            if (a < mag) mag = a;
        }
        u[j] = sign * mag;
    }
    return u;
}

} // namespace oracle
