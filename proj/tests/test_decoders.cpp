#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qldpc/channel.hpp"
#include "qldpc/css.hpp"
#include "qldpc/decoders.hpp"
#include "qldpc/tanner.hpp"
#include "test_util.hpp"

using namespace qldpc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t edge_id(const TannerGraph& g, std::size_t check, std::size_t var) {
    for (std::size_t e = g.check_edge_begin[check]; e < g.check_edge_begin[check + 1]; ++e)
        if (g.edge_var[e] == var) return e;
    throw std::logic_error("no such edge");
}

// Random parity-check matrix whose rows all have weight >= 2, so the LP check
// update is defined and min-sum messages stay finite.
BinaryMatrix random_regularish(SplitMix64& rng, std::size_t rows, std::size_t cols) {
    std::vector<std::vector<std::uint32_t>> support(rows);
    for (auto& row : support) {
        const std::size_t w = 2 + rng.next_below(std::min<std::size_t>(cols - 1, 4));
        while (row.size() < w) {
            const auto c = static_cast<std::uint32_t>(rng.next_below(cols));
            if (std::find(row.begin(), row.end(), c) == row.end()) row.push_back(c);
        }
        std::sort(row.begin(), row.end());
    }
    return BinaryMatrix::from_rows(rows, cols, support);
}

std::vector<double> random_llrs(SplitMix64& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) {
        x = (rng.next_double() - 0.5) * 6.0;
        if (rng.next_below(12) == 0) x = 0.0; // exercise the sgn(0) = -1 branch
        if (rng.next_below(12) == 0) x = -v[rng.next_below(n)]; // plant magnitude ties
    }
    return v;
}

// Dense per-(check, var) reimplementation of one full min-sum pass, built
// directly from the update formulas with the naive O(d^2) oracle kernel.
struct NaiveMsGrid {
    std::map<std::pair<std::size_t, std::size_t>, double> u, v;
};

BinaryVector naive_ms_pass(NaiveMsGrid& grid, const BinaryMatrix& h, const BinaryVector& s,
                           const std::vector<double>& lambda, double alpha) {
    const auto ht = h.transposed();
    for (std::size_t j = 0; j < h.cols(); ++j)
        for (auto i : ht.row_support(j)) {
            double acc = 0.0;
            for (auto i2 : ht.row_support(j))
                if (i2 != i) acc += grid.u[{i2, j}];
            grid.v[{i, j}] = lambda[j] + alpha * acc;
        }
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::vector<double> vv;
        for (auto j : h.row_support(i)) vv.push_back(grid.v[{i, j}]);
        const auto uu = oracle::cn_update(vv, s.get(i) ? 1 : 0);
        std::size_t t = 0;
        for (auto j : h.row_support(i)) grid.u[{i, j}] = uu[t++];
    }
    BinaryVector e_hat(h.cols());
    for (std::size_t j = 0; j < h.cols(); ++j) {
        double acc = 0.0;
        for (auto i : ht.row_support(j)) acc += grid.u[{i, j}];
        e_hat.set(j, !(lambda[j] + alpha * acc > 0.0));
    }
    return e_hat;
}

} // namespace

// ----------------------------------------------------------- scalar helpers

TEST_CASE("hard decision and sign conventions") {
    CHECK(hd(0.5) == 0);
    CHECK(hd(-0.5) == 1);
    CHECK(hd(0.0) == 1); // zero decides an error
    CHECK(sgn_val(2.0) == 1.0);
    CHECK(sgn_val(-2.0) == -1.0);
    CHECK(sgn_val(0.0) == -1.0);
    CHECK(syndrome_sign(0) == 1.0);
    CHECK(syndrome_sign(1) == -1.0);
}

// ------------------------------------------------------------------ spc_max

TEST_CASE("spc_max worked examples") {
    const std::vector<double> v{2.0, -1.0, 3.0};
    CHECK(spc_max(v, Parity::Even) == 5.0); // {2, 3}
    CHECK(spc_max(v, Parity::Odd) == 4.0);  // {2, -1, 3}

    CHECK(spc_max(std::vector<double>{}, Parity::Even) == 0.0);
    CHECK_THROWS_AS(spc_max(std::vector<double>{}, Parity::Odd), std::invalid_argument);

    const std::vector<double> one{5.0};
    CHECK(spc_max(one, Parity::Even) == 0.0);
    CHECK(spc_max(one, Parity::Odd) == 5.0);

    const std::vector<double> neg{-1.0, -2.0};
    CHECK(spc_max(neg, Parity::Even) == 0.0);
    CHECK(spc_max(neg, Parity::Odd) == -1.0);

    const std::vector<double> tie{1.0, 1.0, -1.0};
    CHECK(spc_max(tie, Parity::Even) == 2.0);
    CHECK(spc_max(tie, Parity::Odd) == 1.0);

    const std::vector<double> zero{0.0, 0.0};
    CHECK(spc_max(zero, Parity::Even) == 0.0);
    CHECK(spc_max(zero, Parity::Odd) == 0.0);
}

TEST_CASE("spc_max matches subset enumeration") {
    SplitMix64 rng(0xdec0de01);
    // Continuous draws: the optimal subset is unique, so the index-order sum
    // must match enumeration bit for bit.
    for (int it = 0; it < 2000; ++it) {
        const std::size_t len = 1 + rng.next_below(12);
        std::vector<double> v(len);
        for (auto& x : v) x = (rng.next_double() - 0.5) * 6.0;
        CHECK(spc_max(v, Parity::Even) == oracle::spc_max(v, false));
        CHECK(spc_max(v, Parity::Odd) == oracle::spc_max(v, true));
    }
    // Dyadic grid with zeros and magnitude ties: every subset sum is exact,
    // so tied maximizers agree bit for bit as well.
    for (int it = 0; it < 2000; ++it) {
        const std::size_t len = 1 + rng.next_below(12);
        std::vector<double> v(len);
        for (auto& x : v) x = 0.25 * (static_cast<double>(rng.next_below(33)) - 16.0);
        CHECK(spc_max(v, Parity::Even) == oracle::spc_max(v, false));
        CHECK(spc_max(v, Parity::Odd) == oracle::spc_max(v, true));
    }
}

// ---------------------------------------------------------- check-node rule

TEST_CASE("min-sum check update worked example") {
    const std::vector<double> v{1.5, -2.0, 0.5};
    std::vector<double> u(3);
    cn_min_sum_update(v, 0, u);
    CHECK(u[0] == -0.5); // sgn(-2) sgn(0.5) min(2, 0.5)
    CHECK(u[1] == 0.5);
    CHECK(u[2] == -1.5);
    cn_min_sum_update(v, 1, u);
    CHECK(u[0] == 0.5); // unsatisfied check flips every sign
    CHECK(u[1] == -0.5);
    CHECK(u[2] == 1.5);

    // A zero message carries sign -1 and magnitude 0.
    const std::vector<double> withzero{0.0, 1.0};
    cn_min_sum_update(withzero, 0, u = std::vector<double>(2));
    CHECK(u[0] == 1.0);
    CHECK(u[1] == -0.0);

    // Degree 1: empty product and min give sf * +inf.
    std::vector<double> u1(1);
    cn_min_sum_update(std::vector<double>{-3.0}, 0, u1);
    CHECK(u1[0] == kInf);
    cn_min_sum_update(std::vector<double>{-3.0}, 1, u1);
    CHECK(u1[0] == -kInf);
}

TEST_CASE("min-sum check update matches the direct oracle") {
    SplitMix64 rng(0xdec0de02);
    for (int it = 0; it < 2000; ++it) {
        const std::size_t deg = 1 + rng.next_below(8);
        const auto v = random_llrs(rng, deg);
        for (int s = 0; s <= 1; ++s) {
            std::vector<double> u(deg);
            cn_min_sum_update(v, s, u);
            const auto expect = oracle::cn_update(v, s);
            for (std::size_t t = 0; t < deg; ++t) CHECK(u[t] == expect[t]);
        }
    }
}

// --------------------------------------------------------------- full MS pass

TEST_CASE("single-check min-sum decode worked example") {
    const auto h = BinaryMatrix::from_rows(1, 3, {{0, 1, 2}});
    const auto g = build_tanner(h);
    const std::vector<double> lambda{0.5, 1.0, -0.25};
    DecoderConfig cfg;

    MsState st(g, lambda);
    const auto s = BinaryVector::from_string("1");
    DecodeOutcome out = sb_ms_decode(s, g, cfg, lambda, &st);
    CHECK(out.converged);
    CHECK(out.ms_iterations == 1);
    CHECK(out.e_hat.to_string() == "001");
    CHECK(out.s_hat == s);
    CHECK(out.stop_reason == StopReason::SyndromeMatched);
    // Cold pass: v = lambda, u = -1 * (product of other signs) * min |other|.
    CHECK(st.v == std::vector<double>{0.5, 1.0, -0.25});
    CHECK(st.u == std::vector<double>{0.25, 0.25, -0.5});
}

TEST_CASE("ring code min-sum decode worked example") {
    // Weight-1 error at variable 0 of the 3-ring: s = (1, 0, 1).
    const auto h = ring_repetition(3);
    const auto g = build_tanner(h);
    const std::vector<double> lambda(3, 2.0);
    DecoderConfig cfg;

    MsState st(g, lambda);
    const auto s = BinaryVector::from_string("101");
    const auto out = sb_ms_decode(s, g, cfg, lambda, &st);
    CHECK(out.converged);
    CHECK(out.ms_iterations == 1);
    CHECK(out.e_hat.to_string() == "100");
    // Check-to-var messages are +-lambda with the syndrome's sign.
    CHECK(st.u[edge_id(g, 0, 0)] == -2.0);
    CHECK(st.u[edge_id(g, 0, 1)] == -2.0);
    CHECK(st.u[edge_id(g, 1, 1)] == 2.0);
    CHECK(st.u[edge_id(g, 1, 2)] == 2.0);
    CHECK(st.u[edge_id(g, 2, 0)] == -2.0);
    CHECK(st.u[edge_id(g, 2, 2)] == -2.0);
}

TEST_CASE("min-sum pass matches naive dense reimplementation") {
    SplitMix64 rng(0xdec0de03);
    for (int it = 0; it < 40; ++it) {
        const std::size_t rows = 2 + rng.next_below(5);
        const std::size_t cols = 4 + rng.next_below(9);
        const auto h = random_regularish(rng, rows, cols);
        const auto g = build_tanner(h);
        const auto lambda = random_llrs(rng, cols);
        const auto s = testutil::random_vector(rng, rows);
        DecoderConfig cfg;
        cfg.alpha = 0.75;

        MsState st(g, lambda);
        NaiveMsGrid grid;
        for (int pass = 0; pass < 3; ++pass) {
            ms_iteration(st, s, g, cfg);
            const auto naive_e = naive_ms_pass(grid, h, s, lambda, cfg.alpha);
            CHECK(st.e_hat == naive_e);
            for (std::size_t e = 0; e < g.num_edges; ++e) {
                CHECK(st.v[e] == grid.v[{g.edge_check[e], g.edge_var[e]}]);
                CHECK(st.u[e] == grid.u[{g.edge_check[e], g.edge_var[e]}]);
            }
            CHECK(st.s_hat == syndrome(st.e_hat, h));
        }
        CHECK(st.iteration == 3);
    }
}

// --------------------------------------------------------------- LP updates

TEST_CASE("lp update worked example on one check") {
    const auto h = BinaryMatrix::from_rows(1, 3, {{0, 1, 2}});
    const auto g = build_tanner(h);
    const std::vector<double> lambda{0.5, 1.0, -0.25};
    DecoderConfig cfg; // alpha1 = 0.9

    // Warm start u_bar = (0.3, -0.2, 0.1), satisfied check.
    LpState st(g, lambda);
    st.current() = {0.3, -0.2, 0.1};
    sb_lp_iteration(st, BinaryVector::from_string("0"), g, cfg);
    CHECK(st.current()[0] == doctest::Approx(-0.27).epsilon(1e-12));  // T = (0, 0.1), S = 0.5
    CHECK(st.current()[1] == doctest::Approx(-0.405).epsilon(1e-12)); // T = (0.4, 0.3), S = 1.0
    CHECK(st.current()[2] == doctest::Approx(0.0225).epsilon(1e-12)); // T = (0.1, 0.3), S = -0.25
    CHECK(st.e_hat.to_string() == "001");
    CHECK(st.iteration == 1);

    // Same start, unsatisfied check: the T parities swap.
    LpState st1(g, lambda);
    st1.current() = {0.3, -0.2, 0.1};
    sb_lp_iteration(st1, BinaryVector::from_string("1"), g, cfg);
    CHECK(st1.current()[0] == doctest::Approx(-0.18).epsilon(1e-12));  // T = (0.1, 0)
    CHECK(st1.current()[1] == doctest::Approx(-0.495).epsilon(1e-12)); // T = (0.3, 0.4)
    CHECK(st1.current()[2] == doctest::Approx(0.2025).epsilon(1e-12)); // T = (0.3, 0.1)
}

TEST_CASE("cold start lp update is minus half alpha1 lambda") {
    // With u_bar = 0 every reduced vector is all zeros, so T0 = T1 = 0 for
    // either syndrome bit and the first update is -(alpha1/2) * lambda_j.
    const auto h = ring_repetition(3);
    const auto g = build_tanner(h);
    const std::vector<double> lambda{2.0, -1.5, 0.75};
    DecoderConfig cfg;
    for (const char* s_str : {"000", "101", "111"}) {
        LpState st(g, lambda);
        sb_lp_iteration(st, BinaryVector::from_string(s_str), g, cfg);
        for (std::size_t e = 0; e < g.num_edges; ++e)
            CHECK(st.current()[e] ==
                  doctest::Approx(-0.45 * lambda[g.edge_var[e]]).epsilon(1e-12));
    }
}

TEST_CASE("single-check lp decode worked example") {
    const auto h = BinaryMatrix::from_rows(1, 3, {{0, 1, 2}});
    const auto g = build_tanner(h);
    const std::vector<double> lambda{0.5, 1.0, -0.25};
    DecoderConfig cfg;
    const auto out = sb_lp_decode(BinaryVector::from_string("1"), g, cfg, lambda);
    CHECK(out.converged);
    CHECK(out.lp_iterations == 1);
    CHECK(out.ms_iterations == 0);
    CHECK(out.e_hat.to_string() == "001");
    CHECK(out.stop_reason == StopReason::SyndromeMatched);
}

TEST_CASE("ring code lp decode worked example") {
    // Hand-computed trajectory: three passes of identical hard decisions while
    // the messages drift, then convergence to the true weight-1 error.
    const auto h = ring_repetition(3);
    const auto g = build_tanner(h);
    const std::vector<double> lambda(3, 2.0);
    DecoderConfig cfg;
    cfg.record_trace = true;
    const auto out = sb_lp_decode(BinaryVector::from_string("101"), g, cfg, lambda);
    CHECK(out.converged);
    CHECK(out.lp_iterations == 4);
    CHECK(out.e_hat.to_string() == "100");
    CHECK(out.stop_reason == StopReason::SyndromeMatched);
    CHECK(out.trace.lp_unmatched == std::vector<std::uint32_t>{2, 2, 2, 0});
    CHECK(out.trace.ms_unmatched.empty());
}

TEST_CASE("lp pass matches naive reimplementation") {
    SplitMix64 rng(0xdec0de04);
    for (int it = 0; it < 40; ++it) {
        const std::size_t rows = 2 + rng.next_below(4);
        const std::size_t cols = 4 + rng.next_below(8);
        const auto h = random_regularish(rng, rows, cols);
        const auto g = build_tanner(h);
        const auto lambda = random_llrs(rng, cols);
        const auto s = testutil::random_vector(rng, rows);
        DecoderConfig cfg;

        LpState st(g, lambda);
        auto init = random_llrs(rng, g.num_edges);
        st.current() = init;

        std::vector<double> cur = init;
        const auto ht = h.transposed();
        for (int pass = 0; pass < 3; ++pass) {
            sb_lp_iteration(st, s, g, cfg);
            std::vector<double> nxt(g.num_edges);
            for (std::size_t e = 0; e < g.num_edges; ++e) {
                const std::size_t i = g.edge_check[e], j = g.edge_var[e];
                std::vector<double> reduced;
                for (std::size_t e2 = g.check_edge_begin[i]; e2 < g.check_edge_begin[i + 1]; ++e2)
                    if (e2 != e) reduced.push_back(cur[e2]);
                const bool odd0 = s.get(i); // reduced parity keeping the check satisfied
                const double t0 = oracle::spc_max(reduced, odd0);
                const double t1 = oracle::spc_max(reduced, !odd0);
                double s_sum = lambda[j];
                for (auto i2 : ht.row_support(j))
                    if (i2 != i) s_sum += cur[edge_id(g, i2, j)];
                nxt[e] = 0.5 * cfg.alpha1 * (t0 - t1 - s_sum);
            }
            for (std::size_t e = 0; e < g.num_edges; ++e) CHECK(st.current()[e] == nxt[e]);
            BinaryVector e_hat(cols);
            for (std::size_t j = 0; j < cols; ++j) {
                double acc = lambda[j];
                for (auto i2 : ht.row_support(j)) acc += nxt[edge_id(g, i2, j)];
                e_hat.set(j, !(acc > 0.0));
            }
            CHECK(st.e_hat == e_hat);
            CHECK(st.s_hat == syndrome(st.e_hat, h));
            cur = nxt;
        }
    }
}

// ------------------------------------------------------------ decode drivers

TEST_CASE("steane weight-1 behavior, all decoders") {
    // Outcomes are deterministic and scale-invariant in the uniform prior, so the
    // prior value is immaterial. Columns 0, 1, 3 have variable degree 1.
    const auto code = steane_code();
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.06));
    const RowBasis stabilizers(code.hx);
    DecoderConfig cfg;

    SUBCASE("sb-ms converges on every case; the all-ones syndrome lands on a logical coset") {
        for (std::size_t j = 0; j < code.n; ++j) {
            BinaryVector e(code.n);
            e.set(j, true);
            const auto out = sb_ms_decode(syndrome(e, code.hz), g, cfg, priors);
            CHECK(out.converged);
            CHECK(out.s_hat == syndrome(out.e_hat, code.hz));
            CHECK(stabilizers.contains(out.e_hat ^ e) == (j != 6));
        }
        // e = {6} hits every check; the first pass flips all variables of degree >= 2.
        BinaryVector e(code.n);
        e.set(6, true);
        const auto out = sb_ms_decode(syndrome(e, code.hz), g, cfg, priors);
        CHECK(out.ms_iterations == 1);
        CHECK(out.e_hat.to_string() == "0010111");
    }

    SUBCASE("sb-lp oscillates on degree-1 columns, succeeds elsewhere") {
        // Cold start gives ubar = -(a1/2)*lambda on every edge, which flips only the
        // degree-3 variable; for s touching a degree-1 column the state then enters a
        // period-2 cycle (e_hat alternating 0000001 / 0000000) and never matches s.
        for (std::size_t j = 0; j < code.n; ++j) {
            BinaryVector e(code.n);
            e.set(j, true);
            const auto out = sb_lp_decode(syndrome(e, code.hz), g, cfg, priors);
            const bool deg1 = (j == 0 || j == 1 || j == 3);
            CHECK(out.converged == !deg1);
            if (out.converged) {
                CHECK(out.s_hat == syndrome(out.e_hat, code.hz));
                CHECK(stabilizers.contains(out.e_hat ^ e));
            } else {
                CHECK(out.lp_iterations == cfg.ilp_max);
                CHECK(out.stop_reason == StopReason::BudgetExhausted);
            }
        }
    }

    SUBCASE("combined always matches the syndrome; successes only where neither stage misfires") {
        // The first MS pass leaves s_hat = 0, so the early-stop rule fires at once
        // (d_H = 0 <= dv_max) and hands off to LP for every weight-1 syndrome the MS
        // stage has not already matched. The warm start breaks the LP cycle, but on
        // degree-1 columns it converges to a syndrome-matching pattern in the wrong
        // coset; the all-ones syndrome keeps the MS stage's logical miss.
        for (std::size_t j = 0; j < code.n; ++j) {
            BinaryVector e(code.n);
            e.set(j, true);
            const auto out = combined_decode(syndrome(e, code.hz), g, cfg, priors);
            CHECK(out.converged);
            CHECK(out.s_hat == syndrome(out.e_hat, code.hz));
            const bool success = (j == 2 || j == 4 || j == 5);
            CHECK(stabilizers.contains(out.e_hat ^ e) == success);
        }
    }
}

TEST_CASE("zero syndrome short-circuits") {
    const auto h = ring_repetition(5);
    const auto g = build_tanner(h);
    const auto priors = uniform_priors(5, 3.0);
    const BinaryVector s0(5);
    DecoderConfig cfg;

    auto out = sb_ms_decode(s0, g, cfg, priors);
    CHECK(out.converged);
    CHECK(out.ms_iterations == 0);
    CHECK(out.e_hat.is_zero());
    CHECK(out.stop_reason == StopReason::SyndromeMatched);

    out = sb_lp_decode(s0, g, cfg, priors);
    CHECK(out.converged);
    CHECK(out.lp_iterations == 0);

    // The early-stop loop always executes one pass before testing.
    out = combined_decode(s0, g, cfg, priors);
    CHECK(out.converged);
    CHECK(out.ms_iterations == 1);
    CHECK(out.lp_iterations == 0);
    CHECK(out.stop_reason == StopReason::SyndromeMatched);

    DecoderConfig plain = cfg;
    plain.early_stop = false;
    out = combined_decode(s0, g, plain, priors);
    CHECK(out.converged);
    CHECK(out.ms_iterations == 0);
}

TEST_CASE("budgets bound executed iterations") {
    const auto h = ring_repetition(4);
    const auto g = build_tanner(h);
    const auto priors = uniform_priors(4, 2.0);
    // The ring's checks sum to zero, so odd-weight syndromes are unsatisfiable
    // and every decoder must run to its budget.
    const auto s = BinaryVector::from_string("1000");
    DecoderConfig cfg;
    cfg.ims_max = 2;
    cfg.ilp_max = 3;

    const auto ms = sb_ms_decode(s, g, cfg, priors);
    CHECK_FALSE(ms.converged);
    CHECK(ms.ms_iterations == 2);
    CHECK(ms.stop_reason == StopReason::BudgetExhausted);
    const auto lp = sb_lp_decode(s, g, cfg, priors);
    CHECK_FALSE(lp.converged);
    CHECK(lp.lp_iterations == 3);

    DecoderConfig zero;
    zero.ims_max = 0;
    zero.ilp_max = 0;
    const auto none = sb_ms_decode(s, g, zero, priors);
    CHECK(none.ms_iterations == 0);
    CHECK_FALSE(none.converged);
    CHECK(none.stop_reason == StopReason::BudgetExhausted);
    const auto none_lp = sb_lp_decode(s, g, zero, priors);
    CHECK(none_lp.lp_iterations == 0);
    CHECK_FALSE(none_lp.converged);
}

TEST_CASE("combined decoder hands off exactly the min-sum edge state") {
    // Find a deterministic case where plain SB-MS fails, then check that the
    // combined decoder's LP stage equals sb_lp_decode seeded with u + v.
    const auto code = hypergraph_product(ring_repetition(5), ring_repetition(5), "ring5");
    const auto g = build_tanner(code.hz);
    const double p = 0.1;
    const auto priors = uniform_priors(code.n, prior_llr(p));
    DecoderConfig cfg;
    cfg.ims_max = 25;
    cfg.ilp_max = 75;

    DepolarizingChannel channel(p, 0x9d0ff);
    bool exercised_handoff = false;
    for (int trial = 0; trial < 400 && !exercised_handoff; ++trial) {
        const auto err = channel.sample(code.n);
        const auto s = syndrome(err.ex, code.hz);
        if (s.is_zero()) continue;

        const auto combined = combined_decode(s, g, cfg, priors);
        if (combined.stop_reason != StopReason::EarlyStoppedThenLp) continue;
        exercised_handoff = true;

        // Replicate the MS stage with the early-stop guard by hand.
        MsState ms(g, priors);
        const auto thr = static_cast<std::size_t>(cfg.dv_threshold.value_or(static_cast<int>(g.dv_max)));
        std::size_t step;
        do {
            const BinaryVector pre = ms.s_hat;
            ms_iteration(ms, s, g, cfg);
            step = hamming_distance(pre, ms.s_hat);
        } while (step > thr && ms.iteration < cfg.ims_max);
        CHECK(ms.iteration == combined.ms_iterations);
        REQUIRE(ms.s_hat != s);

        std::vector<double> init(g.num_edges);
        for (std::size_t e = 0; e < g.num_edges; ++e) init[e] = ms.u[e] + ms.v[e];
        const auto lp = sb_lp_decode(s, g, cfg, priors, &init);
        CHECK(lp.e_hat == combined.e_hat);
        CHECK(lp.converged == combined.converged);
        CHECK(lp.lp_iterations == combined.lp_iterations);
    }
    CHECK(exercised_handoff);
}

TEST_CASE("early stop threshold controls the handoff point") {
    const auto code = hypergraph_product(ring_repetition(5), ring_repetition(5), "ring5");
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.1));

    DepolarizingChannel channel(0.1, 0x9d1ff);
    for (int trial = 0; trial < 50; ++trial) {
        const auto err = channel.sample(code.n);
        const auto s = syndrome(err.ex, code.hz);
        if (s.is_zero()) continue;

        // A huge threshold fires after exactly one MS pass (unless it matched).
        DecoderConfig eager;
        eager.dv_threshold = 1 << 20;
        const auto out = combined_decode(s, g, eager, priors);
        CHECK(out.ms_iterations == 1);
        if (!(out.converged && out.lp_iterations == 0)) CHECK(out.stop_reason == StopReason::EarlyStoppedThenLp);

        // Threshold 0 fires only once the estimated syndrome reaches a fixed
        // point; the recorded step sequence must end at 0 in that case.
        DecoderConfig strict;
        strict.dv_threshold = 0;
        strict.record_trace = true;
        const auto out2 = combined_decode(s, g, strict, priors);
        if (out2.stop_reason == StopReason::EarlyStoppedThenLp) CHECK(out2.trace.ms_step.back() == 0);
        for (std::size_t t = 0; t + 1 < out2.trace.ms_step.size(); ++t) CHECK(out2.trace.ms_step[t] > 0);
    }
    DecoderConfig bad;
    bad.dv_threshold = -1;
    CHECK_THROWS_AS(combined_decode(BinaryVector(g.num_checks), g, bad, priors), std::invalid_argument);
}

TEST_CASE("message cap keeps values bounded") {
    const auto code = steane_code();
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.06));
    DecoderConfig cfg;
    cfg.llr_cap = 1.25;
    cfg.ims_max = 5;

    BinaryVector e(code.n);
    e.set(6, true);
    MsState st(g, priors);
    sb_ms_decode(syndrome(e, code.hz), g, cfg, priors, &st);
    for (double x : st.v) CHECK(std::fabs(x) <= 1.25);
    for (double x : st.u) CHECK(std::fabs(x) <= 1.25);

    // Degree-1 checks produce infinite messages; the cap tames them.
    const auto h1 = BinaryMatrix::from_rows(2, 2, {{0}, {0, 1}});
    const auto g1 = build_tanner(h1);
    DecoderConfig capped;
    capped.llr_cap = 10.0;
    MsState st1(g1, uniform_priors(2, 1.0));
    const auto out = sb_ms_decode(BinaryVector::from_string("10"), g1, capped, uniform_priors(2, 1.0), &st1);
    for (double x : st1.u) CHECK(std::fabs(x) <= 10.0);
    CHECK(out.converged);
}

TEST_CASE("decode input validation") {
    const auto g = build_tanner(ring_repetition(3));
    const auto priors = uniform_priors(3, 2.0);
    DecoderConfig cfg;
    CHECK_THROWS_AS(sb_ms_decode(BinaryVector(2), g, cfg, priors), std::invalid_argument);
    CHECK_THROWS_AS(sb_ms_decode(BinaryVector(3), g, cfg, uniform_priors(2, 1.0)), std::invalid_argument);
    DecoderConfig neg;
    neg.ims_max = -1;
    CHECK_THROWS_AS(sb_ms_decode(BinaryVector(3), g, neg, priors), std::invalid_argument);
    std::vector<double> bad_init(5, 0.0);
    CHECK_THROWS_AS(sb_lp_decode(BinaryVector(3), g, cfg, priors, &bad_init), std::invalid_argument);
}

TEST_CASE("decoder kinds parse and print") {
    for (auto kind : {DecoderKind::SbMs, DecoderKind::SbLp, DecoderKind::Combined, DecoderKind::CombinedNoEarlyStop})
        CHECK(parse_decoder_kind(decoder_kind_name(kind)) == kind);
    CHECK(decoder_kind_name(DecoderKind::SbMs) == "sb-ms");
    CHECK_THROWS_AS(parse_decoder_kind("bp"), std::invalid_argument);
    CHECK(stop_reason_name(StopReason::EarlyStoppedThenLp) == "early-stopped-then-lp");
}

TEST_CASE("decoding is deterministic") {
    const auto code = hypergraph_product(ring_repetition(4), ring_repetition(4), "ring4");
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.08));
    DepolarizingChannel channel(0.08, 42);
    DecoderConfig cfg;
    cfg.record_trace = true;
    for (int t = 0; t < 20; ++t) {
        const auto err = channel.sample(code.n);
        const auto s = syndrome(err.ex, code.hz);
        for (auto kind : {DecoderKind::SbMs, DecoderKind::SbLp, DecoderKind::Combined}) {
            const auto a = run_decoder(kind, s, g, cfg, priors);
            const auto b = run_decoder(kind, s, g, cfg, priors);
            CHECK(a.e_hat == b.e_hat);
            CHECK(a.converged == b.converged);
            CHECK(a.ms_iterations == b.ms_iterations);
            CHECK(a.lp_iterations == b.lp_iterations);
            CHECK(a.trace.ms_unmatched == b.trace.ms_unmatched);
            CHECK(a.trace.lp_unmatched == b.trace.lp_unmatched);
        }
    }
}

TEST_CASE("trace lengths equal executed iterations") {
    const auto code = hypergraph_product(ring_repetition(5), ring_repetition(5), "ring5");
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.1));
    DepolarizingChannel channel(0.1, 0x77aa);
    DecoderConfig cfg;
    cfg.record_trace = true;
    for (int t = 0; t < 30; ++t) {
        const auto err = channel.sample(code.n);
        const auto s = syndrome(err.ex, code.hz);
        const auto ms = run_decoder(DecoderKind::SbMs, s, g, cfg, priors);
        CHECK(ms.trace.ms_unmatched.size() == static_cast<std::size_t>(ms.ms_iterations));
        CHECK(ms.trace.ms_step.size() == static_cast<std::size_t>(ms.ms_iterations));
        CHECK(ms.trace.lp_unmatched.empty());
        const auto comb = run_decoder(DecoderKind::Combined, s, g, cfg, priors);
        CHECK(comb.trace.ms_unmatched.size() == static_cast<std::size_t>(comb.ms_iterations));
        CHECK(comb.trace.lp_unmatched.size() == static_cast<std::size_t>(comb.lp_iterations));
        if (comb.converged) {
            const auto tail = comb.lp_iterations > 0 ? comb.trace.lp_unmatched.back() : comb.trace.ms_unmatched.back();
            CHECK(tail == 0);
        }
    }
}

TEST_CASE("combined-no-early-stop kind forces the plain guard") {
    const auto code = hypergraph_product(ring_repetition(5), ring_repetition(5), "ring5");
    const auto g = build_tanner(code.hz);
    const auto priors = uniform_priors(code.n, prior_llr(0.1));
    DepolarizingChannel channel(0.1, 0x77ab);
    DecoderConfig cfg; // early_stop left true; the kind must override it
    for (int t = 0; t < 30; ++t) {
        const auto err = channel.sample(code.n);
        const auto s = syndrome(err.ex, code.hz);
        const auto a = run_decoder(DecoderKind::CombinedNoEarlyStop, s, g, cfg, priors);
        DecoderConfig off = cfg;
        off.early_stop = false;
        const auto b = combined_decode(s, g, off, priors);
        CHECK(a.e_hat == b.e_hat);
        CHECK(a.ms_iterations == b.ms_iterations);
        CHECK(a.lp_iterations == b.lp_iterations);
        CHECK(a.stop_reason != StopReason::EarlyStoppedThenLp);
    }
}
