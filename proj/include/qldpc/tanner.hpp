#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

// Bipartite check/variable adjacency of a parity-check matrix. Edges are
// sorted by (check, var); an edge's id is its position in that order, so the
// per-check lists form contiguous CSR ranges and per-variable lists are
// ascending in check index.
struct TannerGraph {
    std::size_t num_checks = 0, num_vars = 0, num_edges = 0;
    std::vector<std::uint32_t> edge_check, edge_var;  // per edge id
    std::vector<std::uint32_t> check_edge_begin;      // size num_checks + 1
    std::vector<std::vector<std::uint32_t>> var_edges; // per var, edge ids
    std::size_t dc_max = 0, dv_max = 0;
    // Zero-degree checks/vars are legal but reported here.
    std::vector<std::string> warnings;

    std::size_t check_degree(std::size_t i) const { return check_edge_begin[i + 1] - check_edge_begin[i]; }
    std::size_t var_degree(std::size_t j) const { return var_edges[j].size(); }
};

TannerGraph build_tanner(const BinaryMatrix& h);

// Recomputes s_hat = e_hat * H^T through the graph adjacency.
void graph_syndrome(const TannerGraph& g, const BinaryVector& e_hat, BinaryVector& s_out);

} // namespace qldpc
