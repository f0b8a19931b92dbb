#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qldpc/alist.hpp"
#include "qldpc/channel.hpp"
#include "qldpc/css.hpp"
#include "qldpc/decoders.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/simulator.hpp"
#include "qldpc/tanner.hpp"

namespace {

constexpr const char* kArtifactName = "qldpc-lab";
constexpr const char* kArtifactVersion = "0.1.0";

// Thrown for bad inputs/configuration (exit 1); other exceptions exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<qldpc::BinaryVector> read_bitstring_file(const std::string& path, std::size_t expected_len, const char* what) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + std::string(what) + " file " + path);
    std::vector<qldpc::BinaryVector> out;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        qldpc::BinaryVector v;
        try {
            v = qldpc::BinaryVector::from_string(line);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + " file " + path + " line " + std::to_string(line_no) +
                              ": not a bitstring");
        }
        if (v.size() != expected_len)
            throw ConfigError(std::string(what) + " file " + path + " line " + std::to_string(line_no) + ": length " +
                              std::to_string(v.size()) + ", expected " + std::to_string(expected_len));
        out.push_back(std::move(v));
    }
    if (out.empty()) throw ConfigError(std::string(what) + " file " + path + " contains no bitstrings");
    return out;
}

void print_trace_line(std::ostream& out, const std::string& prefix, std::uint64_t trial, const qldpc::DecodeTrace& tr) {
    out << prefix << "trial=" << trial << " ms_unmatched=[";
    for (std::size_t k = 0; k < tr.ms_unmatched.size(); ++k) out << (k ? " " : "") << tr.ms_unmatched[k];
    out << "] ms_step=[";
    for (std::size_t k = 0; k < tr.ms_step.size(); ++k) out << (k ? " " : "") << tr.ms_step[k];
    out << "] lp_unmatched=[";
    for (std::size_t k = 0; k < tr.lp_unmatched.size(); ++k) out << (k ? " " : "") << tr.lp_unmatched[k];
    out << "]\n";
}

struct CommonDecoderFlags {
    double alpha = 0.75;
    double alpha1 = 0.9;
    int ims_max = -1; // -1: per-kind default
    int ilp_max = -1;
    bool no_early_stop = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "Min-sum scaling factor")->capture_default_str();
        cmd->add_option("--alpha1", alpha1, "LP update scaling factor")->capture_default_str();
        cmd->add_option("--ims-max", ims_max, "MS iteration budget (default 100 standalone, 25 combined)");
        cmd->add_option("--ilp-max", ilp_max, "LP iteration budget (default 100 standalone, 75 combined)");
        cmd->add_flag("--no-early-stop", no_early_stop, "Disable early stopping in the combined decoder");
    }

    qldpc::DecoderConfig resolve(qldpc::DecoderKind kind) const {
        qldpc::DecoderConfig cfg;
        cfg.alpha = alpha;
        cfg.alpha1 = alpha1;
        const bool combined = kind == qldpc::DecoderKind::Combined || kind == qldpc::DecoderKind::CombinedNoEarlyStop;
        cfg.ims_max = ims_max >= 0 ? ims_max : (combined ? 25 : 100);
        cfg.ilp_max = ilp_max >= 0 ? ilp_max : (combined ? 75 : 100);
        cfg.early_stop = !no_early_stop;
        return cfg;
    }
};

// ---------------------------------------------------------------- code build

struct CodeBuildArgs {
    std::string type;
    std::string name;
    std::string out_dir = ".";
    std::size_t ell = 3;
    std::vector<std::uint32_t> a_shifts, b_shifts;
    std::string h1_path, h2_path, hx_path, hz_path;
};

int cmd_code_build(const CodeBuildArgs& a) {
    std::optional<qldpc::CssCode> code;
    if (a.type == "steane") {
        code = qldpc::steane_code();
    } else if (a.type == "benchmark") {
        code = qldpc::benchmark_hgp_code();
    } else if (a.type == "hgp-ring") {
        auto h = qldpc::ring_repetition(a.ell);
        code = qldpc::hypergraph_product(h, h, "hgp-ring" + std::to_string(a.ell));
    } else if (a.type == "gb") {
        if (a.a_shifts.empty() || a.b_shifts.empty()) throw ConfigError("--type gb requires --a and --b shift lists");
        code = qldpc::generalized_bicycle(a.ell, a.a_shifts, a.b_shifts, "gb" + std::to_string(2 * a.ell));
    } else if (a.type == "hgp") {
        if (a.h1_path.empty() || a.h2_path.empty()) throw ConfigError("--type hgp requires --h1 and --h2 alist files");
        code = qldpc::hypergraph_product(qldpc::from_alist_file(a.h1_path), qldpc::from_alist_file(a.h2_path), "hgp");
    } else if (a.type == "pair") {
        if (a.hx_path.empty() || a.hz_path.empty()) throw ConfigError("--type pair requires --hx and --hz alist files");
        code.emplace("pair", qldpc::from_alist_file(a.hx_path), qldpc::from_alist_file(a.hz_path));
    } else {
        throw ConfigError("unknown code type '" + a.type + "'");
    }
    if (!a.name.empty()) code->name = a.name;

    const std::string manifest = qldpc::save_code(*code, a.out_dir);
    const auto gx = qldpc::build_tanner(code->hx);
    const auto gz = qldpc::build_tanner(code->hz);
    std::cout << "code " << code->name << ": n=" << code->n << " k=" << code->k << " hx=" << code->hx.rows() << "x"
              << code->hx.cols() << " (dc<=" << gx.dc_max << ", dv<=" << gx.dv_max << ") hz=" << code->hz.rows() << "x"
              << code->hz.cols() << " (dc<=" << gz.dc_max << ", dv<=" << gz.dv_max << ")\n";
    for (const auto& w : gx.warnings) std::cout << "warning (hx): " << w << '\n';
    for (const auto& w : gz.warnings) std::cout << "warning (hz): " << w << '\n';
    std::cout << "wrote " << manifest << '\n';
    return 0;
}

// -------------------------------------------------------------------- decode

struct DecodeArgs {
    std::string code_manifest;
    std::string decoder = "combined";
    std::string syndrome_path, error_path;
    double p = 0.01;
    CommonDecoderFlags flags;
    std::string trace_path, out_path;
};

int cmd_decode(const DecodeArgs& a) {
    const qldpc::CssCode code = qldpc::load_code(a.code_manifest);
    const qldpc::DecoderKind kind = qldpc::parse_decoder_kind(a.decoder);
    qldpc::DecoderConfig cfg = a.flags.resolve(kind);
    cfg.record_trace = !a.trace_path.empty();

    if (a.syndrome_path.empty() == a.error_path.empty())
        throw ConfigError("exactly one of --syndrome or --error is required");

    std::vector<qldpc::BinaryVector> syndromes;
    if (!a.syndrome_path.empty()) {
        syndromes = read_bitstring_file(a.syndrome_path, code.hz.rows(), "syndrome");
    } else {
        for (auto& e : read_bitstring_file(a.error_path, code.n, "error"))
            syndromes.push_back(qldpc::syndrome(e, code.hz));
    }

    const auto graph = qldpc::build_tanner(code.hz);
    const auto priors = qldpc::uniform_priors(code.n, qldpc::prior_llr(a.p));

    std::ofstream out_file, trace_file;
    if (!a.out_path.empty()) {
        out_file.open(a.out_path, std::ios::binary);
        if (!out_file) throw ConfigError("cannot open " + a.out_path + " for writing");
    }
    if (!a.trace_path.empty()) {
        trace_file.open(a.trace_path, std::ios::binary);
        if (!trace_file) throw ConfigError("cannot open " + a.trace_path + " for writing");
    }
    std::ostream& out = a.out_path.empty() ? std::cout : out_file;

    for (std::size_t t = 0; t < syndromes.size(); ++t) {
        const auto outcome = qldpc::run_decoder(kind, syndromes[t], graph, cfg, priors);
        out << outcome.e_hat.to_string() << " converged=" << (outcome.converged ? 1 : 0)
            << " ms_iters=" << outcome.ms_iterations << " lp_iters=" << outcome.lp_iterations
            << " stop=" << qldpc::stop_reason_name(outcome.stop_reason) << '\n';
        if (trace_file.is_open()) print_trace_line(trace_file, "", t, outcome.trace);
    }
    return 0;
}

// --------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string code_manifest;
    std::vector<std::string> decoders;
    std::vector<double> p_list;
    std::uint64_t seed = 1;
    std::uint64_t target_errors = 100;
    std::uint64_t max_trials = 1000000;
    CommonDecoderFlags flags;
    std::string out_path = "sweep.csv";
    std::string trace_path;
};

std::string sweep_fingerprint(const SweepArgs& a, const qldpc::CssCode& code) {
    std::ostringstream ss;
    ss << code.name << '|' << code.n << '|' << code.k << '|';
    for (const auto& d : a.decoders) ss << d << ',';
    ss << '|';
    for (double p : a.p_list) ss << qldpc::format_double(p) << ',';
    ss << '|' << a.seed << '|' << a.target_errors << '|' << a.max_trials << '|'
       << qldpc::format_double(a.flags.alpha) << '|' << qldpc::format_double(a.flags.alpha1) << '|' << a.flags.ims_max
       << '|' << a.flags.ilp_max << '|' << a.flags.no_early_stop << '|' << !a.trace_path.empty();
    return std::to_string(fnv1a(ss.str()));
}

int cmd_sweep(const SweepArgs& a) {
    const qldpc::CssCode code = qldpc::load_code(a.code_manifest);
    if (a.decoders.empty()) throw ConfigError("at least one --decoder is required");
    if (a.p_list.empty()) throw ConfigError("a non-empty --p-list is required");
    if (a.max_trials == 0) throw ConfigError("--max-trials must be positive");

    std::vector<std::pair<qldpc::DecoderKind, qldpc::DecoderConfig>> entries;
    for (const auto& name : a.decoders) {
        const auto kind = qldpc::parse_decoder_kind(name);
        auto cfg = a.flags.resolve(kind);
        cfg.record_trace = !a.trace_path.empty();
        entries.emplace_back(kind, cfg);
    }

    const std::string fingerprint = sweep_fingerprint(a, code);
    const std::string checkpoint_path = a.out_path + ".checkpoint.json";

    // Resume: skip (decoder, p) pairs already committed to the CSV.
    std::vector<std::pair<std::string, double>> completed;
    bool resuming = false;
    if (std::filesystem::exists(checkpoint_path) && std::filesystem::exists(a.out_path)) {
        std::ifstream ck(checkpoint_path);
        nlohmann::json j;
        ck >> j;
        if (j.value("fingerprint", "") == fingerprint) {
            resuming = true;
            for (const auto& item : j["completed"])
                completed.emplace_back(item["decoder"].get<std::string>(), item["p"].get<double>());
            std::cerr << "resuming: " << completed.size() << " completed point(s) found\n";
        }
    }
    auto is_completed = [&completed](const std::string& d, double p) {
        for (const auto& [cd, cp] : completed)
            if (cd == d && cp == p) return true;
        return false;
    };

    std::ofstream csv(a.out_path, resuming ? std::ios::app | std::ios::binary : std::ios::binary);
    if (!csv) throw ConfigError("cannot open " + a.out_path + " for writing");
    if (!resuming) {
        qldpc::write_csv_header(csv);
        csv.flush();
    }

    std::ofstream trace_file;
    if (!a.trace_path.empty()) {
        trace_file.open(a.trace_path, resuming ? std::ios::app | std::ios::binary : std::ios::binary);
        if (!trace_file) throw ConfigError("cannot open " + a.trace_path + " for writing");
    }

    auto write_checkpoint = [&]() {
        nlohmann::json j;
        j["fingerprint"] = fingerprint;
        j["completed"] = nlohmann::json::array();
        for (const auto& [d, p] : completed) j["completed"].push_back({{"decoder", d}, {"p", p}});
        std::ofstream ck(checkpoint_path, std::ios::binary);
        ck << j.dump(2) << '\n';
    };

    const auto t_start = std::chrono::steady_clock::now();
    const qldpc::StopRule stop{a.target_errors, a.max_trials};
    std::vector<qldpc::PointStats> all_points;

    for (const auto& [kind, cfg] : entries) {
        const std::string kind_name = qldpc::decoder_kind_name(kind);
        for (const double p : a.p_list) {
            if (is_completed(kind_name, p)) continue;
            qldpc::SimOptions opt;
            std::string prefix = "decoder=" + kind_name + " p=" + qldpc::format_double(p) + " ";
            if (trace_file.is_open())
                opt.on_trial = [&trace_file, &prefix](const qldpc::TrialRecord& r) {
                    print_trace_line(trace_file, prefix, r.trial, r.outcome.trace);
                };
            const auto t0 = std::chrono::steady_clock::now();
            const auto st = qldpc::run_point(code, kind, p, cfg, stop, a.seed, opt);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            qldpc::write_csv_row(csv, st);
            csv.flush();
            if (trace_file.is_open()) trace_file.flush();
            completed.emplace_back(kind_name, p);
            write_checkpoint();
            all_points.push_back(st);
            std::cout << "point decoder=" << kind_name << " p=" << qldpc::format_double(p) << " trials=" << st.trials
                      << " logical_errors=" << st.logical_errors << " ler=" << qldpc::format_double(st.ler)
                      << " avg_iters=" << qldpc::format_double(st.avg_total_iters) << " (" << qldpc::format_double(secs)
                      << " s)\n";
        }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    // Run manifest next to the CSV.
    nlohmann::json manifest;
    manifest["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
    manifest["code"] = {{"name", code.name}, {"n", code.n}, {"k", code.k}, {"manifest", a.code_manifest}};
    manifest["decoders"] = nlohmann::json::array();
    for (const auto& [kind, cfg] : entries)
        manifest["decoders"].push_back({{"kind", qldpc::decoder_kind_name(kind)},
                                        {"alpha", cfg.alpha},
                                        {"alpha1", cfg.alpha1},
                                        {"ims_max", cfg.ims_max},
                                        {"ilp_max", cfg.ilp_max},
                                        {"early_stop", cfg.early_stop}});
    manifest["p_list"] = a.p_list;
    manifest["stop"] = {{"target_logical_errors", a.target_errors}, {"max_trials", a.max_trials}};
    manifest["seed"] = a.seed;
    manifest["workers"] = qldpc::resolve_workers(0);
    manifest["wall_seconds"] = wall;
    manifest["csv"] = a.out_path;
    std::ofstream mf(a.out_path + ".manifest.json", std::ios::binary);
    if (mf) mf << manifest.dump(2) << '\n';

    std::error_code ec;
    std::filesystem::remove(checkpoint_path, ec); // clean completion
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kArtifactName) + " " + kArtifactVersion +
                 " - syndrome-based decoding laboratory for CSS LDPC codes"};
    app.require_subcommand(1);

    // code build
    auto* code_cmd = app.add_subcommand("code", "Code construction utilities");
    code_cmd->require_subcommand(1);
    auto* build_cmd = code_cmd->add_subcommand("build", "Construct a CSS code and write alists plus a JSON manifest");
    CodeBuildArgs build_args;
    build_cmd->add_option("--type", build_args.type, "steane | benchmark | hgp-ring | gb | hgp | pair")->required();
    build_cmd->add_option("--name", build_args.name, "Override the code name");
    build_cmd->add_option("--out-dir", build_args.out_dir, "Output directory")->capture_default_str();
    build_cmd->add_option("--ell", build_args.ell, "Circulant size (hgp-ring, gb)")->capture_default_str();
    build_cmd->add_option("--a", build_args.a_shifts, "Circulant shifts of A (gb)")->delimiter(',');
    build_cmd->add_option("--b", build_args.b_shifts, "Circulant shifts of B (gb)")->delimiter(',');
    build_cmd->add_option("--h1", build_args.h1_path, "First factor alist (hgp)");
    build_cmd->add_option("--h2", build_args.h2_path, "Second factor alist (hgp)");
    build_cmd->add_option("--hx", build_args.hx_path, "H_X alist (pair)");
    build_cmd->add_option("--hz", build_args.hz_path, "H_Z alist (pair)");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "Decode syndromes or error patterns from a file");
    DecodeArgs decode_args;
    decode_cmd->add_option("--code", decode_args.code_manifest, "Code manifest JSON")->required();
    decode_cmd->add_option("--decoder", decode_args.decoder, "sb-ms | sb-lp | combined | combined-no-early-stop")
        ->capture_default_str();
    decode_cmd->add_option("--syndrome", decode_args.syndrome_path, "Syndrome bitstrings, one per line");
    decode_cmd->add_option("--error", decode_args.error_path, "X-error bitstrings, one per line");
    decode_cmd->add_option("--p", decode_args.p, "Depolarizing rate for the prior LLRs")->capture_default_str();
    decode_args.flags.attach(decode_cmd);
    decode_cmd->add_option("--trace", decode_args.trace_path, "Write per-iteration unmatched-syndrome traces here");
    decode_cmd->add_option("--out", decode_args.out_path, "Write results here instead of stdout");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over physical error rates");
    SweepArgs sweep_args;
    sweep_cmd->add_option("--code", sweep_args.code_manifest, "Code manifest JSON")->required();
    sweep_cmd->add_option("--decoder", sweep_args.decoders, "Decoder kind (repeatable)")->required()->delimiter(',');
    sweep_cmd->add_option("--p-list,--p", sweep_args.p_list, "Physical error rates")->required()->delimiter(',');
    sweep_cmd->add_option("--seed", sweep_args.seed, "Master seed")->capture_default_str();
    sweep_cmd->add_option("--target-errors", sweep_args.target_errors, "Stop a point after this many logical errors")
        ->capture_default_str();
    sweep_cmd->add_option("--max-trials", sweep_args.max_trials, "Trial cap per point")->capture_default_str();
    sweep_args.flags.attach(sweep_cmd);
    sweep_cmd->add_option("--out", sweep_args.out_path, "Output CSV path")->capture_default_str();
    sweep_cmd->add_option("--trace", sweep_args.trace_path, "Write per-trial iteration traces here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build_cmd->parsed()) return cmd_code_build(build_args);
        if (decode_cmd->parsed()) return cmd_decode(decode_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const qldpc::AlistParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}
