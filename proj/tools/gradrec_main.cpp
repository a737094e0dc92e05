// Command line front end for the gradrec shared library. Everything here
// goes through the public C API; diagnostics go to stderr, data to files or
// stdout ("-").

#include <cstdint>
#include <cstdio>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradrec/gradrec.h"

namespace {

struct SignalDeleter {
    void operator()(gradrec_signal* s) const { gradrec_signal_free(s); }
};
struct MaskDeleter {
    void operator()(gradrec_mask* m) const { gradrec_mask_free(m); }
};
struct ResultDeleter {
    void operator()(gradrec_result* r) const { gradrec_result_free(r); }
};

using SignalPtr = std::unique_ptr<gradrec_signal, SignalDeleter>;
using MaskPtr = std::unique_ptr<gradrec_mask, MaskDeleter>;
using ResultPtr = std::unique_ptr<gradrec_result, ResultDeleter>;

void check(gradrec_status status) {
    if (status != GRADREC_OK) {
        throw std::runtime_error(std::string(gradrec_last_error()) + " [" +
                                 gradrec_status_name(status) + "]");
    }
}

// "amplitude:cycles", e.g. "3:10".
void parse_component(const std::string& text, std::vector<double>& amplitudes,
                     std::vector<int>& cycles) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw CLI::ValidationError("--component", "expected amplitude:cycles, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const double amplitude = std::stod(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(text);
        const std::string cycles_text = text.substr(colon + 1);
        const int cycle_count = std::stoi(cycles_text, &used);
        if (used != cycles_text.size()) throw std::invalid_argument(text);
        amplitudes.push_back(amplitude);
        cycles.push_back(cycle_count);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--component", "expected amplitude:cycles, got '" + text + "'");
    }
}

void parse_pair(const std::string& text, std::vector<double>& d0, std::vector<double>& mu0) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--pair", "expected d0:mu0, got '" + text + "'");
    }
    try {
        d0.push_back(std::stod(text.substr(0, colon)));
        mu0.push_back(std::stod(text.substr(colon + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--pair", "expected d0:mu0, got '" + text + "'");
    }
}

SignalPtr make_signal(std::size_t n, const std::vector<double>& amplitudes,
                      const std::vector<int>& cycles) {
    gradrec_signal* raw = nullptr;
    check(gradrec_signal_generate(n, amplitudes.data(), cycles.data(), amplitudes.size(), &raw));
    return SignalPtr(raw);
}

void print_warnings(const gradrec_result* result) {
    size_t count = 0;
    check(gradrec_result_warning_count(result, &count));
    for (size_t i = 0; i < count; ++i) {
        std::fprintf(stderr, "warning: %s\n", gradrec_result_warning(result, i));
    }
}

std::vector<uint64_t> resolve_seeds(std::size_t seed_count,
                                    const std::vector<uint64_t>& explicit_seeds) {
    if (!explicit_seeds.empty()) return explicit_seeds;
    std::vector<uint64_t> seeds(seed_count);
    std::iota(seeds.begin(), seeds.end(), 1);  // --seeds N means seeds 1..N
    return seeds;
}

struct EngineFlags {
    gradrec_config config{};
    bool no_decay = false;

    void attach(CLI::App* cmd) {
        gradrec_config_defaults(&config);
        cmd->add_option("--d0,--d", config.d0,
                        "initial probe step for the finite-difference measure gradient")
            ->capture_default_str();
        cmd->add_option("--mu0,--mu", config.mu0, "initial gain applied to the gradient update")
            ->capture_default_str();
        cmd->add_option("--p", config.norm_p, "norm order of the concentration measure (>= 1)")
            ->capture_default_str();
        cmd->add_option("--iterations", config.max_iterations, "iteration budget")
            ->capture_default_str();
        cmd->add_option("--stage-length", config.stage_length,
                        "iterations between step/gain decays")
            ->capture_default_str();
        cmd->add_option("--decay-factor", config.decay_factor,
                        "divisor applied to step and gain after each stage")
            ->capture_default_str();
        cmd->add_flag("--no-decay", no_decay, "keep step and gain constant for every iteration");
        cmd->add_option("--amplitude-bound", config.amplitude_bound,
                        "assumed bound on missing sample magnitudes")
            ->capture_default_str();
        cmd->add_option("--stop-step-below", config.stop_step_threshold,
                        "stop early once the decayed step falls below this (0 = never)")
            ->capture_default_str();
    }

    gradrec_config resolve() const {
        gradrec_config resolved = config;
        resolved.schedule_enabled = no_decay ? 0 : 1;
        return resolved;
    }
};

int run(int argc, char** argv) {
    CLI::App app{
        "Reconstruction of missing samples in frequency-sparse signals by "
        "adaptive-step gradient descent on a spectral concentration measure"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic multitone test signal");
    std::size_t gen_n = 128;
    std::vector<std::string> gen_components;
    std::string gen_out = "-";
    generate->add_option("--n", gen_n, "signal length")->capture_default_str();
    generate->add_option("--component", gen_components,
                         "sinusoid amplitude:cycles (repeatable; default 3:10 and 1:15)");
    generate->add_option("--out", gen_out, "output signal CSV path, - for stdout")
        ->capture_default_str();

    // mask
    auto* mask_cmd = app.add_subcommand("mask", "Draw a random sampling mask");
    std::size_t mask_n = 128;
    std::size_t mask_missing = 0;
    uint64_t mask_seed = 0;
    std::string mask_out = "-";
    mask_cmd->add_option("--n", mask_n, "mask length")->capture_default_str();
    mask_cmd->add_option("--num-missing,--missing", mask_missing, "number of missing samples")
        ->required();
    mask_cmd->add_option("--seed", mask_seed, "mask RNG seed")->required();
    mask_cmd->add_option("--out", mask_out, "output mask CSV path, - for stdout")
        ->capture_default_str();

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct missing samples of one signal");
    std::string rec_in;
    std::string rec_mask_path;
    std::size_t rec_missing = 0;
    uint64_t rec_seed = 0;
    double rec_noise_variance = 0.0;
    uint64_t rec_noise_seed = 0;
    std::string rec_out = "-";
    std::string rec_trace;
    bool rec_no_reference = false;
    std::size_t rec_n = 128;
    std::vector<std::string> rec_components;
    EngineFlags rec_engine;
    rec->add_option("--in", rec_in, "input signal CSV (default: built-in two-tone test signal)");
    rec->add_option("--n", rec_n, "length of the built-in test signal")->capture_default_str();
    rec->add_option("--component", rec_components,
                    "built-in signal component amplitude:cycles (repeatable)");
    auto* rec_mask_opt = rec->add_option("--mask", rec_mask_path, "mask CSV path");
    auto* rec_missing_opt =
        rec->add_option("--num-missing,--missing", rec_missing,
                        "draw a random mask with this many missing samples");
    auto* rec_seed_opt = rec->add_option("--seed", rec_seed, "mask RNG seed");
    rec_mask_opt->excludes(rec_missing_opt);
    rec_missing_opt->needs(rec_seed_opt);
    auto* rec_var_opt = rec->add_option("--noise-variance", rec_noise_variance,
                                        "corrupt the signal with Gaussian noise of this variance");
    auto* rec_nseed_opt = rec->add_option("--noise-seed", rec_noise_seed, "noise RNG seed");
    rec_var_opt->needs(rec_nseed_opt);
    rec->add_option("--out", rec_out, "reconstructed signal CSV path, - for stdout")
        ->capture_default_str();
    rec->add_option("--trace", rec_trace, "also write the per-iteration convergence trace CSV");
    rec->add_flag("--no-reference", rec_no_reference,
                  "do not treat the input as ground truth (omits the trace MAE column)");
    rec_engine.attach(rec);

    // sweep-params
    auto* sweep = app.add_subcommand("sweep-params",
                                     "Sweep (d0, mu0) pairs and missing counts over seeds");
    std::string sweep_preset;
    std::vector<std::string> sweep_pairs;
    std::vector<std::size_t> sweep_missing;
    std::size_t sweep_seed_count = 0;
    std::vector<uint64_t> sweep_seeds;
    std::size_t sweep_n = 128;
    std::vector<std::string> sweep_components;
    std::size_t sweep_iterations = 320;
    std::size_t sweep_stage = 20;
    double sweep_decay = 10.0;
    bool sweep_no_decay = false;
    double sweep_p = 1.0;
    std::string sweep_out;
    std::string sweep_summary;
    sweep->add_option("--preset", sweep_preset, "built-in grid: table1")
        ->check(CLI::IsMember({"table1"}));
    sweep->add_option("--pair", sweep_pairs, "d0:mu0 pair (repeatable)");
    sweep->add_option("--missing", sweep_missing, "missing-sample count (repeatable)");
    auto* sweep_count_opt =
        sweep->add_option("--seeds", sweep_seed_count, "use seeds 1..N");
    auto* sweep_list_opt = sweep->add_option("--seed", sweep_seeds, "explicit seed (repeatable)");
    sweep_count_opt->excludes(sweep_list_opt);
    sweep->add_option("--n", sweep_n, "signal length")->capture_default_str();
    sweep->add_option("--component", sweep_components, "signal component amplitude:cycles");
    sweep->add_option("--iterations", sweep_iterations, "iteration budget")->capture_default_str();
    sweep->add_option("--stage-length", sweep_stage, "iterations between decays")
        ->capture_default_str();
    sweep->add_option("--decay-factor", sweep_decay, "divisor per stage")->capture_default_str();
    sweep->add_flag("--no-decay", sweep_no_decay, "constant step and gain");
    sweep->add_option("--p", sweep_p, "norm order")->capture_default_str();
    sweep->add_option("--out", sweep_out, "per-run rows CSV path")->required();
    sweep->add_option("--summary", sweep_summary, "median-per-configuration CSV path");

    // sweep-noise
    auto* noise = app.add_subcommand("sweep-noise",
                                     "Sweep noise variances and missing counts over seeds");
    std::string noise_preset;
    std::vector<double> noise_variances;
    std::vector<std::size_t> noise_missing;
    std::size_t noise_seed_count = 0;
    std::vector<uint64_t> noise_seeds;
    std::size_t noise_n = 128;
    std::vector<std::string> noise_components;
    std::string noise_out;
    std::string noise_summary;
    EngineFlags noise_engine;
    noise->add_option("--preset", noise_preset, "built-in grid: table2")
        ->check(CLI::IsMember({"table2"}));
    noise->add_option("--variance", noise_variances, "noise variance (repeatable, ascending)");
    noise->add_option("--missing", noise_missing, "missing-sample count (repeatable)");
    auto* noise_count_opt = noise->add_option("--seeds", noise_seed_count, "use seeds 1..N");
    auto* noise_list_opt = noise->add_option("--seed", noise_seeds, "explicit seed (repeatable)");
    noise_count_opt->excludes(noise_list_opt);
    noise->add_option("--n", noise_n, "signal length")->capture_default_str();
    noise->add_option("--component", noise_components, "signal component amplitude:cycles");
    noise->add_option("--out", noise_out, "per-run rows CSV path")->required();
    noise->add_option("--summary", noise_summary, "median-per-configuration CSV path");
    noise_engine.attach(noise);

    // case
    auto* case_cmd = app.add_subcommand("case", "Reproduce one of the scripted case studies");
    std::string case_id;
    uint64_t case_seed = 0;
    std::string case_trace;
    std::string case_overlay;
    case_cmd
        ->add_option("--id", case_id,
                     "case1_constant (constant step), case1_adaptive, case2 (73% missing) or "
                     "case3 (noisy)")
        ->required()
        ->check(CLI::IsMember({"case1_constant", "case1_adaptive", "case2", "case3"}));
    case_cmd->add_option("--seed", case_seed, "mask RNG seed")->required();
    case_cmd->add_option("--trace", case_trace, "convergence trace CSV path")->required();
    case_cmd->add_option("--overlay", case_overlay, "signal overlay CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    const auto default_components = [](std::vector<double>& amplitudes, std::vector<int>& cycles,
                                       const std::vector<std::string>& texts) {
        for (const std::string& text : texts) parse_component(text, amplitudes, cycles);
        if (amplitudes.empty()) {
            amplitudes = {3.0, 1.0};
            cycles = {10, 15};
        }
    };

    if (generate->parsed()) {
        std::vector<double> amplitudes;
        std::vector<int> cycles;
        default_components(amplitudes, cycles, gen_components);
        SignalPtr signal = make_signal(gen_n, amplitudes, cycles);
        check(gradrec_signal_write_csv(signal.get(), gen_out.c_str()));
        return 0;
    }

    if (mask_cmd->parsed()) {
        gradrec_mask* raw = nullptr;
        check(gradrec_mask_random(mask_n, mask_missing, mask_seed, &raw));
        MaskPtr mask(raw);
        check(gradrec_mask_write_csv(mask.get(), mask_out.c_str()));
        return 0;
    }

    if (rec->parsed()) {
        SignalPtr clean;
        if (!rec_in.empty()) {
            gradrec_signal* raw = nullptr;
            check(gradrec_signal_read_csv(rec_in.c_str(), &raw));
            clean.reset(raw);
        } else {
            std::vector<double> amplitudes;
            std::vector<int> cycles;
            default_components(amplitudes, cycles, rec_components);
            clean = make_signal(rec_n, amplitudes, cycles);
        }
        size_t n = 0;
        check(gradrec_signal_length(clean.get(), &n));

        MaskPtr mask;
        if (!rec_mask_path.empty()) {
            gradrec_mask* raw = nullptr;
            check(gradrec_mask_read_csv(rec_mask_path.c_str(), &raw));
            mask.reset(raw);
        } else if (rec_missing_opt->count() > 0) {
            gradrec_mask* raw = nullptr;
            check(gradrec_mask_random(n, rec_missing, rec_seed, &raw));
            mask.reset(raw);
        } else {
            std::fprintf(stderr, "error: specify --mask FILE or --num-missing K --seed S\n");
            return 1;
        }

        SignalPtr observed;
        if (rec_var_opt->count() > 0) {
            gradrec_signal* raw = nullptr;
            check(gradrec_signal_add_noise(clean.get(), rec_noise_variance, rec_noise_seed, &raw));
            observed.reset(raw);
        }

        const gradrec_config config = rec_engine.resolve();
        gradrec_result* raw_result = nullptr;
        check(gradrec_reconstruct(observed ? observed.get() : clean.get(), mask.get(), &config,
                                  rec_no_reference ? nullptr : clean.get(), &raw_result));
        ResultPtr result(raw_result);
        print_warnings(result.get());

        gradrec_signal* raw_reconstructed = nullptr;
        check(gradrec_result_signal(result.get(), &raw_reconstructed));
        SignalPtr reconstructed(raw_reconstructed);
        check(gradrec_signal_write_csv(reconstructed.get(), rec_out.c_str()));
        if (!rec_trace.empty()) {
            check(gradrec_result_write_trace_csv(result.get(), rec_trace.c_str()));
        }
        return 0;
    }

    if (sweep->parsed()) {
        if (sweep_seed_count == 0 && sweep_seeds.empty()) {
            std::fprintf(stderr, "error: specify --seeds N or --seed S (seeds are never "
                                 "defaulted from the clock)\n");
            return 1;
        }
        const std::vector<uint64_t> seeds = resolve_seeds(sweep_seed_count, sweep_seeds);
        const char* summary = sweep_summary.empty() ? nullptr : sweep_summary.c_str();
        if (sweep_preset == "table1") {
            check(gradrec_run_table1_sweep(seeds.data(), seeds.size(), sweep_out.c_str(),
                                           summary));
            return 0;
        }
        if (sweep_pairs.empty() || sweep_missing.empty()) {
            std::fprintf(stderr,
                         "error: specify --preset table1, or --pair and --missing lists\n");
            return 1;
        }
        std::vector<double> d0, mu0;
        for (const std::string& text : sweep_pairs) parse_pair(text, d0, mu0);
        std::vector<double> amplitudes;
        std::vector<int> cycles;
        default_components(amplitudes, cycles, sweep_components);

        gradrec_sweep_spec spec{};
        spec.signal_length = sweep_n;
        spec.amplitudes = amplitudes.data();
        spec.cycles = cycles.data();
        spec.num_components = amplitudes.size();
        spec.d0 = d0.data();
        spec.mu0 = mu0.data();
        spec.num_pairs = d0.size();
        spec.missing_counts = sweep_missing.data();
        spec.num_missing_counts = sweep_missing.size();
        spec.seeds = seeds.data();
        spec.num_seeds = seeds.size();
        spec.stage_length = sweep_stage;
        spec.decay_factor = sweep_decay;
        spec.schedule_enabled = sweep_no_decay ? 0 : 1;
        spec.norm_p = sweep_p;
        spec.max_iterations = sweep_iterations;
        check(gradrec_run_parameter_sweep(&spec, sweep_out.c_str(), summary));
        return 0;
    }

    if (noise->parsed()) {
        if (noise_seed_count == 0 && noise_seeds.empty()) {
            std::fprintf(stderr, "error: specify --seeds N or --seed S (seeds are never "
                                 "defaulted from the clock)\n");
            return 1;
        }
        const std::vector<uint64_t> seeds = resolve_seeds(noise_seed_count, noise_seeds);
        const char* summary = noise_summary.empty() ? nullptr : noise_summary.c_str();
        if (noise_preset == "table2") {
            check(gradrec_run_table2_sweep(seeds.data(), seeds.size(), noise_out.c_str(),
                                           summary));
            return 0;
        }
        if (noise_variances.empty() || noise_missing.empty()) {
            std::fprintf(stderr,
                         "error: specify --preset table2, or --variance and --missing lists\n");
            return 1;
        }
        std::vector<double> amplitudes;
        std::vector<int> cycles;
        default_components(amplitudes, cycles, noise_components);

        gradrec_noise_sweep_spec spec{};
        spec.signal_length = noise_n;
        spec.amplitudes = amplitudes.data();
        spec.cycles = cycles.data();
        spec.num_components = amplitudes.size();
        spec.variances = noise_variances.data();
        spec.num_variances = noise_variances.size();
        spec.missing_counts = noise_missing.data();
        spec.num_missing_counts = noise_missing.size();
        spec.seeds = seeds.data();
        spec.num_seeds = seeds.size();
        spec.engine = noise_engine.resolve();
        check(gradrec_run_noise_sweep(&spec, noise_out.c_str(), summary));
        return 0;
    }

    if (case_cmd->parsed()) {
        check(gradrec_emit_case_study(case_id.c_str(), case_seed, case_trace.c_str(),
                                      case_overlay.c_str()));
        return 0;
    }

    return 1;  // unreachable, a subcommand is required
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
