#include "qldpc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qldpc {

namespace {
void check_probability(double p) {
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
}
} // namespace

PauliErrorPair sample_pauli_error(std::size_t n, double p, SplitMix64& rng) {
    check_probability(p);
    PauliErrorPair e{BinaryVector(n), BinaryVector(n)};
    const double px = p / 3.0, py = 2.0 * p / 3.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = rng.next_double();
        if (r >= p) continue;
        if (r < py) e.ex.set(j, true);  // X or Y
        if (r >= px) e.ez.set(j, true); // Y or Z
    }
    return e;
}

double prior_llr(double p, std::optional<double> cap) {
    if (p > 1.0 || std::isnan(p)) throw std::invalid_argument("depolarizing probability must lie in (0, 1]");
    if (p <= 0.0) {
        if (cap) return *cap;
        throw std::invalid_argument("p = 0 has an infinite prior LLR; pass a cap to opt in");
    }
    const double q = 2.0 * p / 3.0;
    const double llr = std::log((1.0 - q) / q);
    if (cap && std::abs(llr) > *cap) return llr > 0 ? *cap : -*cap;
    return llr;
}

std::vector<double> uniform_priors(std::size_t n, double llr) { return std::vector<double>(n, llr); }

DepolarizingChannel::DepolarizingChannel(double p, std::uint64_t seed) : p_(p), rng_(seed) { check_probability(p); }

} // namespace qldpc
