#include "qldpc/css.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "qldpc/alist.hpp"

namespace qldpc {

CssCode::CssCode(std::string name_, BinaryMatrix hx_, BinaryMatrix hz_)
    : name(std::move(name_)), hx(std::move(hx_)), hz(std::move(hz_)) {
    if (hx.cols() != hz.cols()) throw std::invalid_argument("H_X and H_Z have different block lengths");
    if (auto bad = css_violation(hx, hz))
        throw std::invalid_argument("CSS commutation fails: H_X row " + std::to_string(bad->first) +
                                    " anticommutes with H_Z row " + std::to_string(bad->second));
    n = hx.cols();
    const std::size_t r = rank(hx) + rank(hz);
    if (r > n) throw std::invalid_argument("rank(H_X) + rank(H_Z) exceeds block length");
    k = n - r;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> css_violation(const BinaryMatrix& hx, const BinaryMatrix& hz) {
    if (hx.cols() != hz.cols()) throw std::invalid_argument("H_X and H_Z have different block lengths");
    for (std::size_t i = 0; i < hx.rows(); ++i)
        for (std::size_t j = 0; j < hz.rows(); ++j)
            if (dot_parity(hx.row(i), hz.row(j)))
                return std::make_pair(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return std::nullopt;
}

bool css_check(const BinaryMatrix& hx, const BinaryMatrix& hz) { return !css_violation(hx, hz); }

BinaryMatrix circulant(std::size_t ell, const std::vector<std::uint32_t>& shifts) {
    if (ell == 0) throw std::invalid_argument("circulant size must be positive");
    for (auto s : shifts)
        if (s >= ell) throw std::invalid_argument("circulant shift " + std::to_string(s) + " out of range");
    std::vector<std::vector<std::uint32_t>> sup(ell);
    for (std::size_t r = 0; r < ell; ++r)
        for (auto s : shifts) sup[r].push_back(static_cast<std::uint32_t>((r + s) % ell));
    // from_rows rejects duplicate shifts via the duplicate-column check
    return BinaryMatrix::from_rows(ell, ell, sup);
}

CssCode hypergraph_product(const BinaryMatrix& h1, const BinaryMatrix& h2, std::string name) {
    const auto i_n1 = BinaryMatrix::identity(h1.cols());
    const auto i_n2 = BinaryMatrix::identity(h2.cols());
    const auto i_m1 = BinaryMatrix::identity(h1.rows());
    const auto i_m2 = BinaryMatrix::identity(h2.rows());
    BinaryMatrix hx = hstack(kron(h1, i_n2), kron(i_m1, h2.transposed()));
    BinaryMatrix hz = hstack(kron(i_n1, h2), kron(h1.transposed(), i_m2));
    return CssCode(std::move(name), std::move(hx), std::move(hz));
}

CssCode generalized_bicycle(std::size_t ell, const std::vector<std::uint32_t>& a_shifts,
                            const std::vector<std::uint32_t>& b_shifts, std::string name) {
    const BinaryMatrix a = circulant(ell, a_shifts);
    const BinaryMatrix b = circulant(ell, b_shifts);
    BinaryMatrix hx = hstack(a, b);
    BinaryMatrix hz = hstack(b.transposed(), a.transposed());
    return CssCode(std::move(name), std::move(hx), std::move(hz));
}

BinaryMatrix ring_repetition(std::size_t ell) { return circulant(ell, {0, 1}); }

BinaryMatrix hamming_7_4_check() {
    std::vector<std::vector<std::uint32_t>> sup(3);
    for (std::uint32_t col = 1; col <= 7; ++col)
        for (std::uint32_t bit = 0; bit < 3; ++bit)
            if ((col >> bit) & 1u) sup[bit].push_back(col - 1);
    return BinaryMatrix::from_rows(3, 7, sup);
}

CssCode steane_code() {
    auto h = hamming_7_4_check();
    return CssCode("steane", h, h);
}

BinaryMatrix transversal_ldpc(std::size_t q, std::size_t w, std::size_t slopes) {
    if (q < 2 || w < 1 || slopes < 1 || slopes > q) throw std::invalid_argument("bad transversal design parameters");
    for (std::size_t d = 1; d < slopes; ++d)
        if (std::gcd(d, q) != 1) throw std::invalid_argument("slope differences must be coprime to q (pick q prime)");
    std::vector<std::vector<std::uint32_t>> sup(slopes * q);
    for (std::size_t s = 0; s < slopes; ++s)
        for (std::size_t c = 0; c < q; ++c)
            for (std::size_t j = 0; j < w; ++j)
                sup[s * q + c].push_back(static_cast<std::uint32_t>(((c + s * j) % q) * w + j));
    return BinaryMatrix::from_rows(slopes * q, q * w, sup);
}

CssCode benchmark_hgp_code() {
    // Shift differences {0, 1, 3} are pairwise distinct mod 21, so the base
    // graph is 4-cycle free; the product graph is (3, 6)-regular.
    const BinaryMatrix h = circulant(21, {0, 1, 3});
    return hypergraph_product(h, h, "hgp882");
}

namespace {
std::string alist_filename(const std::string& name, const char* side) { return name + "." + side + ".alist"; }
} // namespace

std::string save_code(const CssCode& code, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string hx_name = alist_filename(code.name, "hx");
    const std::string hz_name = alist_filename(code.name, "hz");
    to_alist_file(code.hx, (fs::path(dir) / hx_name).string());
    to_alist_file(code.hz, (fs::path(dir) / hz_name).string());

    nlohmann::json j;
    j["name"] = code.name;
    j["n"] = code.n;
    j["k"] = code.k;
    j["hx_alist"] = hx_name; // relative to the manifest directory
    j["hz_alist"] = hz_name;
    const std::string manifest = (fs::path(dir) / (code.name + ".json")).string();
    std::ofstream f(manifest, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + manifest + " for writing");
    f << j.dump(2) << '\n';
    return manifest;
}

CssCode load_code(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    std::ifstream f(manifest_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + manifest_path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid code manifest " + manifest_path + ": " + e.what());
    }
    for (const char* key : {"name", "n", "k", "hx_alist", "hz_alist"})
        if (!j.contains(key)) throw std::invalid_argument("code manifest missing field '" + std::string(key) + "'");

    const fs::path dir = fs::path(manifest_path).parent_path();
    BinaryMatrix hx = from_alist_file((dir / j["hx_alist"].get<std::string>()).string());
    BinaryMatrix hz = from_alist_file((dir / j["hz_alist"].get<std::string>()).string());
    CssCode code(j["name"].get<std::string>(), std::move(hx), std::move(hz));
    if (code.n != j["n"].get<std::size_t>() || code.k != j["k"].get<std::size_t>())
        throw std::invalid_argument("code manifest n/k do not match the stored matrices");
    return code;
}

} // namespace qldpc
