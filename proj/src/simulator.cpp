#include "qldpc/simulator.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qldpc/rng.hpp"
#include "qldpc/tanner.hpp"

namespace qldpc {

namespace {

constexpr std::uint64_t kBlockTrials = 256;

struct BlockTally {
    std::uint64_t trials = 0, failures = 0, non_convergences = 0;
    std::uint64_t sum_ms = 0, sum_lp = 0;
    std::vector<TrialRecord> records;
};

} // namespace

std::string trial_class_name(TrialClass c) {
    switch (c) {
        case TrialClass::Success: return "success";
        case TrialClass::LogicalFailure: return "logical-failure";
        case TrialClass::NonConvergence: return "non-convergence";
    }
    throw std::logic_error("unknown trial class");
}

TrialClass classify_outcome(const PauliErrorPair& error, const DecodeOutcome& outcome, const RowBasis& hx_row_space) {
    if (!outcome.converged) return TrialClass::NonConvergence;
    BinaryVector residual = outcome.e_hat;
    residual ^= error.ex;
    return hx_row_space.contains(residual) ? TrialClass::Success : TrialClass::LogicalFailure;
}

TrialClass classify_outcome(const PauliErrorPair& error, const DecodeOutcome& outcome, const CssCode& code) {
    return classify_outcome(error, outcome, RowBasis(code.hx));
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf requires p in (0, 1)");
    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF via erfc.
    constexpr double kSqrt2Pi = 2.50662827463100050241576528481;
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * kSqrt2Pi * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence) {
    if (k > n) throw std::invalid_argument("wilson_interval requires k <= n");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
    if (n == 0) return {0.0, 1.0};
    const double z = inverse_normal_cdf(1.0 - (1.0 - confidence) / 2.0);
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QLDPC_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

// Runs one block of trials. Every per-trial quantity depends only on
// (point_seed, trial index), never on the executing worker.
BlockTally run_block(std::uint64_t block, std::uint64_t max_trials, const CssCode& code, const TannerGraph& graph,
                     const RowBasis& basis, DecoderKind kind, double p, const DecoderConfig& cfg,
                     const std::vector<double>& priors, std::uint64_t point_seed, bool keep_records) {
    BlockTally tally;
    const std::uint64_t begin = block * kBlockTrials;
    const std::uint64_t end = std::min(begin + kBlockTrials, max_trials);
    for (std::uint64_t t = begin; t < end; ++t) {
        SplitMix64 rng(derive_seed(point_seed, t));
        PauliErrorPair error = sample_pauli_error(code.n, p, rng);
        const BinaryVector s = syndrome(error.ex, code.hz);
        DecodeOutcome outcome = run_decoder(kind, s, graph, cfg, priors);
        const TrialClass cls = classify_outcome(error, outcome, basis);
        ++tally.trials;
        if (cls == TrialClass::LogicalFailure) ++tally.failures;
        if (cls == TrialClass::NonConvergence) ++tally.non_convergences;
        tally.sum_ms += static_cast<std::uint64_t>(outcome.ms_iterations);
        tally.sum_lp += static_cast<std::uint64_t>(outcome.lp_iterations);
        if (keep_records) tally.records.push_back(TrialRecord{t, std::move(error), std::move(outcome), cls});
    }
    return tally;
}

} // namespace

PointStats run_point(const CssCode& code, DecoderKind kind, double p, const DecoderConfig& cfg,
                     const StopRule& stop, std::uint64_t master_seed, const SimOptions& opt) {
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("physical error rate must lie in [0, 1]");
    if (stop.max_trials == 0) throw std::invalid_argument("stop rule admits zero trials");
    const TannerGraph graph = build_tanner(code.hz);
    const RowBasis basis(code.hx);
    const std::uint64_t point_seed = derive_seed(master_seed, double_bits(p));
    // At p = 0 every syndrome is zero, so any positive prior yields the same
    // outcomes; substitute a near-zero rate instead of the rejected p = 0.
    const std::vector<double> priors = uniform_priors(code.n, prior_llr(std::max(p, 1e-300), cfg.llr_cap));

    const std::uint64_t num_blocks = (stop.max_trials + kBlockTrials - 1) / kBlockTrials;
    const bool keep_records = static_cast<bool>(opt.on_trial);
    const int workers = resolve_workers(opt.workers);

    std::vector<BlockTally> results(num_blocks);
    std::vector<std::atomic<bool>> done(num_blocks);
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<bool> halt{false};

    auto compute_block = [&](std::uint64_t b) {
        results[b] = run_block(b, stop.max_trials, code, graph, basis, kind, p, cfg, priors, point_seed, keep_records);
        done[b].store(true, std::memory_order_release);
    };
    // A claimed block is always computed, so the merger never waits on an
    // abandoned claim.
    auto worker_fn = [&]() {
        while (!halt.load(std::memory_order_acquire)) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= num_blocks) return;
            compute_block(b);
        }
    };

    std::vector<std::thread> pool;
    const int spawn = std::max(0, workers - 1);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(worker_fn);

    // Merge blocks strictly in index order; the stop rule sees only the merged
    // prefix, so the set of counted trials is independent of scheduling. The
    // merging thread helps compute while it waits (and is the sole computer
    // when workers == 1).
    PointStats st;
    st.decoder = kind;
    st.p = p;
    st.seed = point_seed;
    std::uint64_t sum_ms = 0, sum_lp = 0;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        while (!done[b].load(std::memory_order_acquire)) {
            const std::uint64_t c = next_block.fetch_add(1);
            if (c < num_blocks)
                compute_block(c);
            else
                std::this_thread::sleep_for(std::chrono::microseconds(50));
        }
        BlockTally& tally = results[b];
        st.trials += tally.trials;
        st.failures += tally.failures;
        st.non_convergences += tally.non_convergences;
        sum_ms += tally.sum_ms;
        sum_lp += tally.sum_lp;
        st.logical_errors = st.failures + (opt.count_nonconvergence_as_logical ? st.non_convergences : 0);
        if (opt.on_trial)
            for (const TrialRecord& r : tally.records) opt.on_trial(r);
        tally.records.clear();
        if (st.logical_errors >= stop.target_logical_errors) break;
    }
    halt.store(true, std::memory_order_release);
    for (auto& th : pool) th.join();

    if (st.trials > 0) {
        st.ler = static_cast<double>(st.logical_errors) / static_cast<double>(st.trials);
        st.avg_ms_iters = static_cast<double>(sum_ms) / static_cast<double>(st.trials);
        st.avg_lp_iters = static_cast<double>(sum_lp) / static_cast<double>(st.trials);
        st.avg_total_iters = static_cast<double>(sum_ms + sum_lp) / static_cast<double>(st.trials);
    }
    auto [lo, hi] = wilson_interval(st.logical_errors, st.trials, opt.confidence);
    st.ci_low = lo;
    st.ci_high = hi;
    return st;
}

std::vector<PointStats> sweep(const CssCode& code, const std::vector<std::pair<DecoderKind, DecoderConfig>>& decoders,
                              const std::vector<double>& p_list, const StopRule& stop, std::uint64_t master_seed,
                              const SimOptions& opt, const std::function<void(const PointStats&)>& on_point) {
    std::vector<PointStats> out;
    out.reserve(decoders.size() * p_list.size());
    for (const auto& [kind, cfg] : decoders)
        for (const double p : p_list) {
            out.push_back(run_point(code, kind, p, cfg, stop, master_seed, opt));
            if (on_point) on_point(out.back());
        }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

const char* const kCsvHeader = "decoder,p,trials,logical_errors,ler,ci_low,ci_high,avg_ms_iters,avg_lp_iters,avg_total_iters,seed";

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const PointStats& st) {
    out << decoder_kind_name(st.decoder) << ',' << format_double(st.p) << ',' << st.trials << ',' << st.logical_errors
        << ',' << format_double(st.ler) << ',' << format_double(st.ci_low) << ',' << format_double(st.ci_high) << ','
        << format_double(st.avg_ms_iters) << ',' << format_double(st.avg_lp_iters) << ','
        << format_double(st.avg_total_iters) << ',' << st.seed << '\n';
}

} // namespace qldpc
