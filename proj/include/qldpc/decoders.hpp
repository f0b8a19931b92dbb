#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/tanner.hpp"

namespace qldpc {

// Hard decision: HD(x) = 0 for x > 0, else 1 (zero decides 1).
inline int hd(double x) { return x > 0.0 ? 0 : 1; }
// sgn(x) = 1 - 2 HD(x): +1 for x > 0, -1 otherwise (including zero).
inline double sgn_val(double x) { return x > 0.0 ? 1.0 : -1.0; }
// Check-side syndrome factor: +1 for a satisfied bit (0), -1 for unsatisfied.
inline double syndrome_sign(int s_bit) { return s_bit ? -1.0 : 1.0; }

enum class Parity { Even, Odd };

// Maximum of <values, b> over binary b of the requested parity, i.e. over the
// even- or odd-weight words of the single parity-check code of that length.
// The empty Even case is 0 (empty word); the empty Odd case is infeasible and
// rejected. The chosen subset is summed in index order so that the result is
// bit-identical to direct enumeration.
double spc_max(std::span<const double> values, Parity parity);

// Min-sum check update: u_out[t] = sf(s_bit) * prod_{t' != t} sgn(v_in[t']) *
// min_{t' != t} |v_in[t']|. For degree 1 the empty product/min give sf * +inf.
void cn_min_sum_update(std::span<const double> v_in, int s_bit, std::span<double> u_out);

enum class DecoderKind { SbMs, SbLp, Combined, CombinedNoEarlyStop };
std::string decoder_kind_name(DecoderKind kind);
DecoderKind parse_decoder_kind(const std::string& name);

struct DecoderConfig {
    double alpha = 0.75;   // min-sum scaling
    double alpha1 = 0.9;   // linear-programming update scaling
    int ims_max = 100;     // max executed MS iterations
    int ilp_max = 100;     // max executed LP iterations
    bool early_stop = true;               // combined decoder only
    std::optional<int> dv_threshold;      // default: max variable degree of the graph
    std::optional<double> llr_cap;        // message magnitude cap, off by default
    bool record_trace = false;
};

struct DecodeTrace {
    std::vector<std::uint32_t> ms_unmatched; // d_H(s, s_hat) after each MS pass
    std::vector<std::uint32_t> ms_step;      // d_H(s_hat_pre, s_hat) after each MS pass
    std::vector<std::uint32_t> lp_unmatched; // d_H(s, s_hat) after each LP iteration
};

// How decoding ended: syndrome-matched = converged without an early-stop
// handoff; early-stopped-then-lp = the d_H(s_hat_pre, s_hat) <= d_v rule fired
// and the LP stage ran (converged reports its outcome); budget-exhausted =
// no convergence and no early-stop handoff.
enum class StopReason { SyndromeMatched, BudgetExhausted, EarlyStoppedThenLp };
std::string stop_reason_name(StopReason r);

struct DecodeOutcome {
    BinaryVector e_hat, s_hat;
    bool converged = false;
    int ms_iterations = 0;
    int lp_iterations = 0;
    StopReason stop_reason = StopReason::BudgetExhausted;
    DecodeTrace trace; // filled when config.record_trace
};

struct MsState {
    std::vector<double> u, v;   // check-to-var / var-to-check messages per edge
    std::vector<double> lambda; // per-variable prior LLRs
    BinaryVector e_hat, s_hat;
    int iteration = 0;

    MsState(const TannerGraph& g, std::vector<double> priors);
};

struct LpState {
    std::array<std::vector<double>, 2> u_bar; // double-buffered per-edge values
    int cur = 0;
    std::vector<double> lambda;
    BinaryVector e_hat, s_hat;
    int iteration = 0;

    LpState(const TannerGraph& g, std::vector<double> priors);
    std::vector<double>& current() { return u_bar[static_cast<std::size_t>(cur)]; }
    const std::vector<double>& current() const { return u_bar[static_cast<std::size_t>(cur)]; }

    std::vector<double> scratch; // reduced-vector workspace
};

// One full MS pass: var updates from previous-iteration u, check updates from
// fresh v, hard decision, syndrome recomputation, iteration count.
void ms_iteration(MsState& st, const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg);

// One fully parallel LP pass over the double buffer, then decision (no alpha1
// in the decision sum), syndrome recomputation, iteration count.
void sb_lp_iteration(LpState& st, const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg);

// Algorithm loops share the guard shape: run while s != s_hat and the budget
// (max executed iterations) has room; s = 0 therefore converges instantly.
DecodeOutcome sb_ms_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                           const std::vector<double>& priors, MsState* final_state = nullptr);
DecodeOutcome sb_lp_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                           const std::vector<double>& priors,
                           const std::vector<double>* init_u_bar = nullptr);

// MS stage (do-while with the early-stop guard when enabled, plain guard
// otherwise), then, unless the syndrome already matches, LP seeded with
// u_bar = u + v and a fresh iteration counter.
DecodeOutcome combined_decode(const BinaryVector& s, const TannerGraph& g, const DecoderConfig& cfg,
                              const std::vector<double>& priors);

DecodeOutcome run_decoder(DecoderKind kind, const BinaryVector& s, const TannerGraph& g,
                          const DecoderConfig& cfg, const std::vector<double>& priors);

} // namespace qldpc
