#include "gradrec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "gradrec/csv.hpp"
#include "gradrec/transform.hpp"

namespace gradrec {

namespace {

constexpr std::uint64_t kNoiseStream = 1;

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

GradientConfig sweep_engine_config(const SweepSpec& spec, double d0, double mu0) {
    GradientConfig config;
    config.initial_step = d0;
    config.initial_gain = mu0;
    config.order = spec.order;
    config.max_iterations = spec.max_iterations;
    config.schedule = spec.schedule;
    return config;
}

SweepRow run_one(const RealSignal& clean, double d0, double mu0, std::size_t num_missing,
                 double variance, std::uint64_t seed, const GradientConfig& config) {
    SweepRow row;
    row.d0 = d0;
    row.mu0 = mu0;
    row.num_missing = num_missing;
    row.variance = variance;
    row.seed = seed;
    try {
        const SamplingMask mask = random_mask(clean.size(), num_missing, seed);
        RealSignal observed = clean;
        if (variance > 0.0) {
            observed = add_noise(clean, NoiseSpec{variance, derive_stream_seed(seed, kNoiseStream)});
            row.snr_db = snr_db(clean, observed).value_or(
                std::numeric_limits<double>::infinity());
        }
        const ReconstructionResult result = reconstruct(observed, mask, config, &clean);
        row.mae_min = result.trace.mae_min();
        row.iter_of_min = result.trace.iteration_of_mae_min();
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

void SweepSpec::validate() const {
    if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
    if (step_gain_pairs.empty()) throw std::invalid_argument("sweep needs at least one (d0, mu0) pair");
    if (missing_counts.empty()) throw std::invalid_argument("sweep needs at least one missing count");
    for (const auto& [d0, mu0] : step_gain_pairs) {
        if (!(d0 > 0.0) || !(mu0 > 0.0)) {
            throw std::invalid_argument("sweep (d0, mu0) pairs must be positive");
        }
    }
    if (max_iterations == 0) throw std::invalid_argument("sweep iteration budget must be >= 1");
    schedule.validate();
}

void NoiseSweepSpec::validate() const {
    if (seeds.empty()) throw std::invalid_argument("noise sweep needs at least one seed");
    if (variances.empty()) throw std::invalid_argument("noise sweep needs at least one variance");
    if (missing_counts.empty()) {
        throw std::invalid_argument("noise sweep needs at least one missing count");
    }
    for (std::size_t i = 0; i < variances.size(); ++i) {
        if (!(variances[i] >= 0.0) || !std::isfinite(variances[i])) {
            throw std::invalid_argument("noise variances must be finite and >= 0");
        }
        if (i > 0 && variances[i] < variances[i - 1]) {
            throw std::invalid_argument("noise variances must be sorted ascending");
        }
    }
    engine.validate();
}

SweepResult run_parameter_sweep(const SweepSpec& spec) {
    spec.validate();
    const RealSignal clean = generate_test_signal(spec.signal_length, spec.components);
    SweepResult result;
    result.rows.reserve(spec.step_gain_pairs.size() * spec.missing_counts.size() *
                        spec.seeds.size());
    for (const auto& [d0, mu0] : spec.step_gain_pairs) {
        const GradientConfig config = sweep_engine_config(spec, d0, mu0);
        for (std::size_t num_missing : spec.missing_counts) {
            for (std::uint64_t seed : spec.seeds) {
                result.rows.push_back(run_one(clean, d0, mu0, num_missing, 0.0, seed, config));
            }
        }
    }
    return result;
}

SweepResult run_noise_sweep(const NoiseSweepSpec& spec) {
    spec.validate();
    const RealSignal clean = generate_test_signal(spec.signal_length, spec.components);
    SweepResult result;
    result.rows.reserve(spec.variances.size() * spec.missing_counts.size() * spec.seeds.size());
    for (double variance : spec.variances) {
        for (std::size_t num_missing : spec.missing_counts) {
            for (std::uint64_t seed : spec.seeds) {
                result.rows.push_back(run_one(clean, spec.engine.initial_step,
                                              spec.engine.initial_gain, num_missing, variance,
                                              seed, spec.engine));
            }
        }
    }
    return result;
}

std::vector<SweepSummaryRow> summarize(const SweepResult& result) {
    // Keyed insertion order: first appearance of each configuration.
    std::vector<SweepSummaryRow> summary;
    std::map<std::tuple<double, double, std::size_t, double>, std::size_t> slot;
    std::vector<std::vector<double>> maes, iters, snrs;
    for (const SweepRow& row : result.rows) {
        const auto key = std::make_tuple(row.d0, row.mu0, row.num_missing, row.variance);
        auto [it, inserted] = slot.try_emplace(key, summary.size());
        if (inserted) {
            SweepSummaryRow s;
            s.d0 = row.d0;
            s.mu0 = row.mu0;
            s.num_missing = row.num_missing;
            s.variance = row.variance;
            summary.push_back(s);
            maes.emplace_back();
            iters.emplace_back();
            snrs.emplace_back();
        }
        if (!row.ok()) continue;
        const std::size_t i = it->second;
        maes[i].push_back(row.mae_min);
        iters[i].push_back(static_cast<double>(row.iter_of_min));
        if (row.snr_db.has_value()) snrs[i].push_back(*row.snr_db);
    }
    for (std::size_t i = 0; i < summary.size(); ++i) {
        summary[i].num_seeds = maes[i].size();
        if (!maes[i].empty()) {
            summary[i].median_mae_min = median(maes[i]);
            summary[i].median_iter_of_min = median(iters[i]);
        }
        if (!snrs[i].empty()) summary[i].median_snr_db = median(snrs[i]);
    }
    return summary;
}

CaseId parse_case_id(std::string_view name) {
    if (name == "case1_constant") return CaseId::case1_constant;
    if (name == "case1_adaptive") return CaseId::case1_adaptive;
    if (name == "case2") return CaseId::case2;
    if (name == "case3") return CaseId::case3;
    throw std::invalid_argument("unknown case id '" + std::string(name) +
                                "' (expected case1_constant, case1_adaptive, case2 or case3)");
}

std::string_view case_id_name(CaseId id) {
    switch (id) {
        case CaseId::case1_constant: return "case1_constant";
        case CaseId::case1_adaptive: return "case1_adaptive";
        case CaseId::case2: return "case2";
        case CaseId::case3: return "case3";
    }
    throw std::logic_error("invalid case id");
}

CaseStudy run_case_study(CaseId id, std::uint64_t seed) {
    const RealSignal clean = generate_test_signal(128, std::vector<Component>{{3.0, 10}, {1.0, 15}});
    GradientConfig config;
    std::size_t num_missing = 64;
    double variance = 0.0;
    switch (id) {
        case CaseId::case1_constant:
            config.initial_step = 0.5;
            config.initial_gain = 1.0;
            config.schedule.enabled = false;
            config.max_iterations = 500;
            break;
        case CaseId::case1_adaptive:
            config.initial_step = 5.0;
            config.initial_gain = 10.0;
            break;
        case CaseId::case2:
            config.initial_step = 20.0;
            config.initial_gain = 40.0;
            num_missing = 94;
            break;
        case CaseId::case3:
            config.initial_step = 10.0;
            config.initial_gain = 20.0;
            variance = 0.1;
            break;
    }

    CaseStudy study{clean, std::nullopt, random_mask(clean.size(), num_missing, seed), {}};
    RealSignal observed = clean;
    if (variance > 0.0) {
        observed = add_noise(clean, NoiseSpec{variance, derive_stream_seed(seed, kNoiseStream)});
        study.noisy = observed;
    }
    study.result = reconstruct(observed, study.mask, config, &clean);
    return study;
}

CaseStudy emit_case_study(CaseId id, std::uint64_t seed, const std::string& trace_path,
                          const std::string& overlay_path) {
    CaseStudy study = run_case_study(id, seed);
    write_trace_csv(trace_path, study.result.trace);
    write_overlay_csv(overlay_path, study.original,
                      study.noisy.has_value() ? &*study.noisy : nullptr, study.mask,
                      study.result.signal);
    return study;
}

SweepSpec table1_sweep_spec(std::span<const std::uint64_t> seeds) {
    SweepSpec spec;
    spec.step_gain_pairs = {{20.0, 40.0}, {10.0, 20.0}, {10.0, 10.0}, {20.0, 20.0}};
    spec.missing_counts = {35, 64, 94};
    spec.seeds.assign(seeds.begin(), seeds.end());
    return spec;
}

NoiseSweepSpec table2_noise_spec(std::span<const std::uint64_t> seeds) {
    NoiseSweepSpec spec;
    spec.variances = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    spec.missing_counts = {30, 50, 64};
    spec.seeds.assign(seeds.begin(), seeds.end());
    return spec;
}

} // namespace gradrec
