#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qldpc/channel.hpp"
#include "qldpc/css.hpp"
#include "qldpc/decoders.hpp"

namespace qldpc {

enum class TrialClass { Success, LogicalFailure, NonConvergence };
std::string trial_class_name(TrialClass c);

struct TrialRecord {
    std::uint64_t trial = 0;
    PauliErrorPair error;
    DecodeOutcome outcome;
    TrialClass classification = TrialClass::Success;
};

struct StopRule {
    std::uint64_t target_logical_errors = UINT64_MAX;
    std::uint64_t max_trials = 0;
};

struct PointStats {
    DecoderKind decoder = DecoderKind::SbMs;
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t logical_errors = 0;     // failures + non-convergences (policy-dependent)
    std::uint64_t failures = 0;           // converged but residual outside rowspace(H_X)
    std::uint64_t non_convergences = 0;
    double ler = 0.0, ci_low = 0.0, ci_high = 1.0;
    double avg_ms_iters = 0.0, avg_lp_iters = 0.0, avg_total_iters = 0.0;
    std::uint64_t seed = 0; // per-point stream seed derived from (master seed, p)
};

struct SimOptions {
    int workers = 0; // 0: QLDPC_WORKERS env var, else hardware concurrency
    bool count_nonconvergence_as_logical = true;
    double confidence = 0.95;
    // Invoked in trial order (records are merged block-by-block, so the
    // sequence is identical for every worker count).
    std::function<void(const TrialRecord&)> on_trial;
};

// Success means the decoder converged and e_hat + e_X is a sum of H_X rows
// (a stabilizer, so the correction is degeneracy-equivalent to the error).
TrialClass classify_outcome(const PauliErrorPair& error, const DecodeOutcome& outcome, const RowBasis& hx_row_space);
TrialClass classify_outcome(const PauliErrorPair& error, const DecodeOutcome& outcome, const CssCode& code);

// 95%-style Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence);

// Quantile of the standard normal (Acklam's rational approximation plus one
// Halley step), used for the Wilson z value.
double inverse_normal_cdf(double p);

// Monte-Carlo at one physical error rate. X errors are decoded against H_Z.
// Trials are processed in fixed blocks of 256; blocks are merged in index
// order and the stop rule is evaluated at block boundaries, so results are
// byte-identical for any worker count.
PointStats run_point(const CssCode& code, DecoderKind kind, double p, const DecoderConfig& cfg,
                     const StopRule& stop, std::uint64_t master_seed, const SimOptions& opt = {});

// Decoder-major, then p in the given order. Point seeds depend only on
// (master seed, p), so every decoder sees the same error sequence at a p.
std::vector<PointStats> sweep(const CssCode& code,
                              const std::vector<std::pair<DecoderKind, DecoderConfig>>& decoders,
                              const std::vector<double>& p_list, const StopRule& stop,
                              std::uint64_t master_seed, const SimOptions& opt = {},
                              const std::function<void(const PointStats&)>& on_point = {});

// CSV with a fixed column set; reals use shortest round-trip formatting.
extern const char* const kCsvHeader;
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const PointStats& st);
std::string format_double(double x);

int resolve_workers(int requested);

} // namespace qldpc
