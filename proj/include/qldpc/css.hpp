#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

// CSS stabilizer code defined by a commuting pair H_X * H_Z^T = 0 over GF(2).
// Construction validates commutation and computes k = n - rank(H_X) - rank(H_Z).
struct CssCode {
    std::string name;
    BinaryMatrix hx, hz;
    std::size_t n = 0, k = 0;

    CssCode(std::string name, BinaryMatrix hx, BinaryMatrix hz);
};

// First (i, j) row pair with odd overlap, or nullopt if the pair commutes.
std::optional<std::pair<std::uint32_t, std::uint32_t>> css_violation(const BinaryMatrix& hx, const BinaryMatrix& hz);
bool css_check(const BinaryMatrix& hx, const BinaryMatrix& hz);

// ell x ell circulant sum_{k in shifts} X^k with (X^k)[r][c] = 1 iff
// c = r + k (mod ell); duplicate or out-of-range shifts are rejected.
BinaryMatrix circulant(std::size_t ell, const std::vector<std::uint32_t>& shifts);

// H_X = [H1 (x) I_n2 | I_m1 (x) H2^T], H_Z = [I_n1 (x) H2 | H1^T (x) I_m2].
CssCode hypergraph_product(const BinaryMatrix& h1, const BinaryMatrix& h2, std::string name = "hgp");

// H_X = [A | B], H_Z = [B^T | A^T] with A, B ell x ell circulants.
CssCode generalized_bicycle(std::size_t ell, const std::vector<std::uint32_t>& a_shifts,
                            const std::vector<std::uint32_t>& b_shifts, std::string name = "gb");

// Circulant I + X: the length-ell ring (cyclic repetition) code.
BinaryMatrix ring_repetition(std::size_t ell);

// [7,4] Hamming parity check (columns are the binary expansions of 1..7).
BinaryMatrix hamming_7_4_check();
CssCode steane_code();

// (3,4)-regular 15x20 matrix without 4-cycles: blocks {(c + s*j mod q, j)} of
// the grid Z_q x Z_w for slope classes s = 0..slopes-1; q must be prime so
// distinct slopes intersect in at most one point.
BinaryMatrix transversal_ldpc(std::size_t q, std::size_t w, std::size_t slopes);

// Fixed mid-size benchmark: hypergraph product of circulant(21, {0, 1, 3})
// with itself, a [[882, 18]] code whose Tanner graphs are (3, 6)-regular.
CssCode benchmark_hgp_code();

// Manifest <name>.json plus <name>.hx.alist / <name>.hz.alist in `dir`.
// Returns the manifest path.
std::string save_code(const CssCode& code, const std::string& dir);
CssCode load_code(const std::string& manifest_path);

} // namespace qldpc
