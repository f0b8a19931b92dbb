#include "qldpc/decoders.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qldpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_llr(double x, const std::optional<double>& cap) {
    if (!cap) return x;
    if (x > *cap) return *cap;
    if (x < -*cap) return -*cap;
    return x;
}

void check_decode_inputs(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                         const std::vector<double>& priors) {
    if (s.size() != g.num_checks) throw std::invalid_argument("syndrome length does not match check count");
    if (priors.size() != g.num_vars) throw std::invalid_argument("prior vector length does not match variable count");
    if (cfg.ims_max < 0 || cfg.ilp_max < 0) throw std::invalid_argument("iteration budgets must be non-negative");
    if (cfg.dv_threshold && *cfg.dv_threshold < 0)
        throw std::invalid_argument("early-stop threshold must be non-negative");
}

} // namespace

std::string decoder_kind_name(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::SbMs: return "sb-ms";
        case DecoderKind::SbLp: return "sb-lp";
        case DecoderKind::Combined: return "combined";
        case DecoderKind::CombinedNoEarlyStop: return "combined-no-early-stop";
    }
    throw std::logic_error("unknown decoder kind");
}

DecoderKind parse_decoder_kind(const std::string& name) {
    if (name == "sb-ms") return DecoderKind::SbMs;
    if (name == "sb-lp") return DecoderKind::SbLp;
    if (name == "combined") return DecoderKind::Combined;
    if (name == "combined-no-early-stop") return DecoderKind::CombinedNoEarlyStop;
    throw std::invalid_argument("unknown decoder kind '" + name + "'");
}

std::string stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::SyndromeMatched: return "syndrome-matched";
        case StopReason::BudgetExhausted: return "budget-exhausted";
        case StopReason::EarlyStoppedThenLp: return "early-stopped-then-lp";
    }
    throw std::logic_error("unknown stop reason");
}

double spc_max(std::span<const double> values, Parity parity) {
    const bool want_odd = (parity == Parity::Odd);
    if (values.empty()) {
        if (want_odd) throw std::invalid_argument("no odd-parity word of length 0 exists");
        return 0.0;
    }
    std::size_t positives = 0, min_idx = 0;
    double min_abs = kInf;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] > 0.0) ++positives;
        const double m = std::fabs(values[k]);
        if (m < min_abs) {
            min_abs = m;
            min_idx = k;
        }
    }
    // The unconstrained maximizer takes every positive entry; a parity
    // mismatch is repaired cheapest by toggling the smallest-magnitude entry.
    // Summing the chosen subset in index order keeps the result bit-identical
    // to enumeration.
    const bool toggle = ((positives & 1u) != static_cast<unsigned>(want_odd));
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        bool member = values[k] > 0.0;
        if (toggle && k == min_idx) member = !member;
        if (member) acc += values[k];
    }
    return acc;
}

void cn_min_sum_update(std::span<const double> v_in, int s_bit, std::span<double> u_out) {
    if (v_in.size() != u_out.size()) throw std::invalid_argument("cn_min_sum_update span size mismatch");
    std::size_t nonpos = 0, min_idx = v_in.size();
    double min1 = kInf, min2 = kInf;
    for (std::size_t t = 0; t < v_in.size(); ++t) {
        if (!(v_in[t] > 0.0)) ++nonpos;
        const double m = std::fabs(v_in[t]);
        if (m < min1) {
            min2 = min1;
            min1 = m;
            min_idx = t;
        } else if (m < min2) {
            min2 = m;
        }
    }
    const double sf = syndrome_sign(s_bit);
    for (std::size_t t = 0; t < v_in.size(); ++t) {
        const std::size_t others_nonpos = nonpos - (v_in[t] > 0.0 ? 0 : 1);
        const double mag = (t == min_idx) ? min2 : min1;
        u_out[t] = sf * ((others_nonpos & 1u) ? -mag : mag);
    }
}

MsState::MsState(const TannerGraph& g, std::vector<double> priors)
    : u(g.num_edges, 0.0), v(g.num_edges, 0.0), lambda(std::move(priors)), e_hat(g.num_vars), s_hat(g.num_checks) {}

LpState::LpState(const TannerGraph& g, std::vector<double> priors)
    : u_bar{std::vector<double>(g.num_edges, 0.0), std::vector<double>(g.num_edges, 0.0)},
      lambda(std::move(priors)), e_hat(g.num_vars), s_hat(g.num_checks) {
    scratch.reserve(g.dc_max);
}

void ms_iteration(MsState& st, const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg) {
    // Var-to-check from previous-iteration u: v_ij = lambda_j + alpha * sum_{i' != i} u_i'j.
    for (std::size_t j = 0; j < g.num_vars; ++j) {
        const auto& edges = g.var_edges[j];
        for (auto e : edges) {
            double acc = 0.0;
            for (auto e2 : edges)
                if (e2 != e) acc += st.u[e2];
            st.v[e] = clamp_llr(st.lambda[j] + cfg.alpha * acc, cfg.llr_cap);
        }
    }
    // Check-to-var from fresh v. Per-check edge ids are contiguous.
    for (std::size_t i = 0; i < g.num_checks; ++i) {
        const std::size_t b = g.check_edge_begin[i], e = g.check_edge_begin[i + 1];
        cn_min_sum_update(std::span<const double>(st.v).subspan(b, e - b), s.get(i),
                          std::span<double>(st.u).subspan(b, e - b));
        if (cfg.llr_cap)
            for (std::size_t t = b; t < e; ++t) st.u[t] = clamp_llr(st.u[t], cfg.llr_cap);
    }
    // Hard decision e_hat_j = HD(lambda_j + alpha * sum_i u_ij), then s_hat.
    for (std::size_t j = 0; j < g.num_vars; ++j) {
        double acc = 0.0;
        for (auto e : g.var_edges[j]) acc += st.u[e];
        st.e_hat.set(j, hd(st.lambda[j] + cfg.alpha * acc) != 0);
    }
    graph_syndrome(g, st.e_hat, st.s_hat);
    ++st.iteration;
}

void sb_lp_iteration(LpState& st, const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg) {
    const auto& cur = st.u_bar[static_cast<std::size_t>(st.cur)];
    auto& nxt = st.u_bar[static_cast<std::size_t>(1 - st.cur)];
    for (std::size_t i = 0; i < g.num_checks; ++i) {
        const std::size_t b = g.check_edge_begin[i], e_end = g.check_edge_begin[i + 1];
        const int s_bit = s.get(i);
        // With b_j fixed, the reduced word over N_i \ {j} needs parity equal
        // to (s_i XOR b_j): T0 keeps the check parity, T1 flips it.
        const Parity p0 = s_bit ? Parity::Odd : Parity::Even;
        const Parity p1 = s_bit ? Parity::Even : Parity::Odd;
        for (std::size_t e = b; e < e_end; ++e) {
            st.scratch.clear();
            for (std::size_t e2 = b; e2 < e_end; ++e2)
                if (e2 != e) st.scratch.push_back(cur[e2]);
            const double t0 = spc_max(st.scratch, p0);
            const double t1 = spc_max(st.scratch, p1);
            const std::size_t j = g.edge_var[e];
            double s_sum = st.lambda[j];
            for (auto e2 : g.var_edges[j])
                if (e2 != e) s_sum += cur[e2];
            nxt[e] = clamp_llr(0.5 * cfg.alpha1 * (t0 - t1 - s_sum), cfg.llr_cap);
        }
    }
    st.cur = 1 - st.cur;
    // Decision from the fresh buffer; no alpha1 scaling here.
    const auto& now = st.current();
    for (std::size_t j = 0; j < g.num_vars; ++j) {
        double acc = st.lambda[j];
        for (auto e : g.var_edges[j]) acc += now[e];
        st.e_hat.set(j, hd(acc) != 0);
    }
    graph_syndrome(g, st.e_hat, st.s_hat);
    ++st.iteration;
}

namespace {

void record_ms_trace(DecodeOutcome& out, const DecoderConfig& cfg, const BinaryVector& s,
                     const BinaryVector& s_pre, const MsState& st) {
    if (!cfg.record_trace) return;
    out.trace.ms_unmatched.push_back(static_cast<std::uint32_t>(hamming_distance(s, st.s_hat)));
    out.trace.ms_step.push_back(static_cast<std::uint32_t>(hamming_distance(s_pre, st.s_hat)));
}

// Shared LP loop: plain guard on (s != s_hat, budget).
void lp_loop(DecodeOutcome& out, LpState& st, const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg) {
    while (st.s_hat != s && st.iteration < cfg.ilp_max) {
        sb_lp_iteration(st, s, g, cfg);
        if (cfg.record_trace)
            out.trace.lp_unmatched.push_back(static_cast<std::uint32_t>(hamming_distance(s, st.s_hat)));
    }
    out.e_hat = st.e_hat;
    out.s_hat = st.s_hat;
    out.converged = (st.s_hat == s);
    out.lp_iterations = st.iteration;
}

} // namespace

DecodeOutcome sb_ms_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                           const std::vector<double>& priors, MsState* final_state) {
    check_decode_inputs(s, g, cfg, priors);
    MsState st(g, priors);
    DecodeOutcome out;
    while (st.s_hat != s && st.iteration < cfg.ims_max) {
        const BinaryVector s_pre = st.s_hat;
        ms_iteration(st, s, g, cfg);
        record_ms_trace(out, cfg, s, s_pre, st);
    }
    out.e_hat = st.e_hat;
    out.s_hat = st.s_hat;
    out.converged = (st.s_hat == s);
    out.ms_iterations = st.iteration;
    out.stop_reason = out.converged ? StopReason::SyndromeMatched : StopReason::BudgetExhausted;
    if (final_state) *final_state = std::move(st);
    return out;
}

DecodeOutcome sb_lp_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                           const std::vector<double>& priors, const std::vector<double>* init_u_bar) {
    check_decode_inputs(s, g, cfg, priors);
    LpState st(g, priors);
    if (init_u_bar) {
        if (init_u_bar->size() != g.num_edges) throw std::invalid_argument("u_bar init length does not match edge count");
        st.current() = *init_u_bar;
    }
    DecodeOutcome out;
    lp_loop(out, st, s, g, cfg);
    out.stop_reason = out.converged ? StopReason::SyndromeMatched : StopReason::BudgetExhausted;
    return out;
}

DecodeOutcome combined_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                              const std::vector<double>& priors) {
    check_decode_inputs(s, g, cfg, priors);
    MsState ms(g, priors);
    DecodeOutcome out;
    bool early_fired = false;

    if (cfg.early_stop) {
        const int dv_threshold = cfg.dv_threshold.value_or(static_cast<int>(g.dv_max));
        std::size_t step;
        // do-while: at least one pass runs even for s = 0.
        do {
            const BinaryVector s_pre = ms.s_hat;
            ms_iteration(ms, s, g, cfg);
            step = hamming_distance(s_pre, ms.s_hat);
            record_ms_trace(out, cfg, s, s_pre, ms);
        } while (step > static_cast<std::size_t>(dv_threshold) && ms.iteration < cfg.ims_max);
        early_fired = (step <= static_cast<std::size_t>(dv_threshold)) && (ms.s_hat != s);
    } else {
        while (ms.s_hat != s && ms.iteration < cfg.ims_max) {
            const BinaryVector s_pre = ms.s_hat;
            ms_iteration(ms, s, g, cfg);
            record_ms_trace(out, cfg, s, s_pre, ms);
        }
    }

    out.ms_iterations = ms.iteration;
    if (ms.s_hat == s) {
        out.e_hat = ms.e_hat;
        out.s_hat = ms.s_hat;
        out.converged = true;
        out.stop_reason = StopReason::SyndromeMatched;
        return out;
    }

    // Handoff: LP starts from u_bar_ij = u_ij + v_ij with a fresh counter.
    LpState lp(g, ms.lambda);
    auto& init = lp.current();
    for (std::size_t e = 0; e < g.num_edges; ++e) init[e] = ms.u[e] + ms.v[e];
    lp_loop(out, lp, s, g, cfg);
    out.stop_reason = early_fired ? StopReason::EarlyStoppedThenLp
                                  : (out.converged ? StopReason::SyndromeMatched : StopReason::BudgetExhausted);
    return out;
}

DecodeOutcome run_decoder(DecoderKind kind, const BinaryVector& s, const TannerGraph& g,
                          const DecoderConfig& cfg, const std::vector<double>& priors) {
    switch (kind) {
        case DecoderKind::SbMs: return sb_ms_decode(s, g, cfg, priors);
        case DecoderKind::SbLp: return sb_lp_decode(s, g, cfg, priors);
        case DecoderKind::Combined: return combined_decode(s, g, cfg, priors);
        case DecoderKind::CombinedNoEarlyStop: {
            DecoderConfig c = cfg;
            c.early_stop = false;
            return combined_decode(s, g, c, priors);
        }
    }
    throw std::logic_error("unknown decoder kind");
}

} // namespace qldpc
