#include "qldpc/tanner.hpp"

#include <stdexcept>

namespace qldpc {

TannerGraph build_tanner(const BinaryMatrix& h) {
    TannerGraph g;
    g.num_checks = h.rows();
    g.num_vars = h.cols();
    g.check_edge_begin.assign(g.num_checks + 1, 0);
    g.var_edges.assign(g.num_vars, {});

    for (std::size_t i = 0; i < g.num_checks; ++i) {
        g.check_edge_begin[i] = static_cast<std::uint32_t>(g.num_edges);
        for (auto j : h.row_support(i)) { // ascending, so edges come out (i, j)-lexicographic
            g.edge_check.push_back(static_cast<std::uint32_t>(i));
            g.edge_var.push_back(j);
            g.var_edges[j].push_back(static_cast<std::uint32_t>(g.num_edges));
            ++g.num_edges;
        }
    }
    g.check_edge_begin[g.num_checks] = static_cast<std::uint32_t>(g.num_edges);

    for (std::size_t i = 0; i < g.num_checks; ++i) {
        g.dc_max = std::max(g.dc_max, g.check_degree(i));
        if (g.check_degree(i) == 0) g.warnings.push_back("check " + std::to_string(i) + " has degree 0 (all-zero row)");
    }
    for (std::size_t j = 0; j < g.num_vars; ++j) {
        g.dv_max = std::max(g.dv_max, g.var_degree(j));
        if (g.var_degree(j) == 0) g.warnings.push_back("variable " + std::to_string(j) + " has degree 0 (all-zero column)");
    }
    return g;
}

void graph_syndrome(const TannerGraph& g, const BinaryVector& e_hat, BinaryVector& s_out) {
    if (e_hat.size() != g.num_vars || s_out.size() != g.num_checks)
        throw std::invalid_argument("graph_syndrome dimension mismatch");
    s_out.clear();
    for (std::size_t i = 0; i < g.num_checks; ++i) {
        unsigned acc = 0;
        for (std::uint32_t e = g.check_edge_begin[i]; e < g.check_edge_begin[i + 1]; ++e)
            acc ^= static_cast<unsigned>(e_hat.get(g.edge_var[e]));
        if (acc) s_out.set(i, true);
    }
}

} // namespace qldpc
