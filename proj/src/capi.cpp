#include "gradrec/gradrec.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "gradrec/csv.hpp"
#include "gradrec/engine.hpp"
#include "gradrec/experiments.hpp"
#include "gradrec/signal.hpp"
#include "gradrec/transform.hpp"

// Opaque handle definitions. Each wraps the corresponding core value; the C
// layer owns translation of exceptions into status codes and nothing else.

struct gradrec_signal {
    gradrec::RealSignal value;
};

struct gradrec_mask {
    gradrec::SamplingMask value;
};

struct gradrec_result {
    gradrec::ReconstructionResult value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

gradrec_status fail_invalid(const std::string& message) {
    set_error(message);
    return GRADREC_ERR_INVALID_ARGUMENT;
}

gradrec_status fail_null(const char* what) {
    set_error(std::string(what) + " must not be NULL");
    return GRADREC_ERR_NULL_POINTER;
}

// Runs `body`, mapping exceptions onto status codes. I/O problems are thrown
// as runtime_error by the CSV layer, argument problems as invalid_argument,
// numeric aborts (non-finite iterates) as runtime_error from the engine; the
// classify flag picks the code for runtime_error.
template <typename Body>
gradrec_status guarded(gradrec_status runtime_code, Body&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return GRADREC_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return runtime_code;
    } catch (const std::exception& e) {
        set_error(e.what());
        return runtime_code;
    }
}

gradrec::GradientConfig to_core_config(const gradrec_config& config) {
    gradrec::GradientConfig core;
    core.initial_step = config.d0;
    core.initial_gain = config.mu0;
    core.order = gradrec::NormOrder(config.norm_p);
    core.max_iterations = config.max_iterations;
    core.amplitude_bound = config.amplitude_bound;
    core.schedule.stage_length = config.stage_length;
    core.schedule.decay_factor = config.decay_factor;
    core.schedule.enabled = config.schedule_enabled != 0;
    core.stop_step_threshold = config.stop_step_threshold;
    return core;
}

std::vector<gradrec::Component> to_components(const double* amplitudes, const int* cycles,
                                              size_t count) {
    std::vector<gradrec::Component> components(count);
    for (size_t i = 0; i < count; ++i) components[i] = {amplitudes[i], cycles[i]};
    return components;
}

} // namespace

extern "C" {

const char* gradrec_last_error(void) { return g_last_error.c_str(); }

const char* gradrec_status_name(gradrec_status status) {
    switch (status) {
        case GRADREC_OK: return "GRADREC_OK";
        case GRADREC_ERR_INVALID_ARGUMENT: return "GRADREC_ERR_INVALID_ARGUMENT";
        case GRADREC_ERR_NULL_POINTER: return "GRADREC_ERR_NULL_POINTER";
        case GRADREC_ERR_IO: return "GRADREC_ERR_IO";
        case GRADREC_ERR_NUMERIC: return "GRADREC_ERR_NUMERIC";
        case GRADREC_SNR_INFINITE: return "GRADREC_SNR_INFINITE";
    }
    return "GRADREC_UNKNOWN_STATUS";
}

gradrec_status gradrec_signal_generate(size_t n, const double* amplitudes, const int* cycles,
                                       size_t num_components, gradrec_signal** out) {
    if (out == nullptr) return fail_null("out");
    if (num_components > 0 && (amplitudes == nullptr || cycles == nullptr)) {
        return fail_null("amplitudes/cycles");
    }
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        auto components = to_components(amplitudes, cycles, num_components);
        *out = new gradrec_signal{gradrec::generate_test_signal(n, components)};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_signal_from_values(const double* values, size_t n, gradrec_signal** out) {
    if (out == nullptr) return fail_null("out");
    if (values == nullptr) return fail_null("values");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = new gradrec_signal{gradrec::RealSignal(std::vector<double>(values, values + n))};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_signal_length(const gradrec_signal* signal, size_t* out) {
    if (signal == nullptr) return fail_null("signal");
    if (out == nullptr) return fail_null("out");
    *out = signal->value.size();
    return GRADREC_OK;
}

gradrec_status gradrec_signal_copy_values(const gradrec_signal* signal, double* buffer,
                                          size_t buffer_len) {
    if (signal == nullptr) return fail_null("signal");
    if (buffer == nullptr) return fail_null("buffer");
    if (buffer_len < signal->value.size()) {
        return fail_invalid("buffer holds " + std::to_string(buffer_len) + " values, need " +
                            std::to_string(signal->value.size()));
    }
    std::memcpy(buffer, signal->value.data().data(), signal->value.size() * sizeof(double));
    return GRADREC_OK;
}

gradrec_status gradrec_signal_read_csv(const char* path, gradrec_signal** out) {
    if (path == nullptr) return fail_null("path");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_IO, [&] {
        *out = new gradrec_signal{gradrec::read_signal_csv(path)};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_signal_write_csv(const gradrec_signal* signal, const char* path) {
    if (signal == nullptr) return fail_null("signal");
    if (path == nullptr) return fail_null("path");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::write_signal_csv(path, signal->value);
        return GRADREC_OK;
    });
}

gradrec_status gradrec_signal_add_noise(const gradrec_signal* signal, double variance,
                                        uint64_t seed, gradrec_signal** out) {
    if (signal == nullptr) return fail_null("signal");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = new gradrec_signal{
            gradrec::add_noise(signal->value, gradrec::NoiseSpec{variance, seed})};
        return GRADREC_OK;
    });
}

void gradrec_signal_free(gradrec_signal* signal) { delete signal; }

gradrec_status gradrec_mask_random(size_t n, size_t num_missing, uint64_t seed,
                                   gradrec_mask** out) {
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = new gradrec_mask{gradrec::random_mask(n, num_missing, seed)};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_mask_from_missing(size_t n, const size_t* missing, size_t num_missing,
                                         gradrec_mask** out) {
    if (out == nullptr) return fail_null("out");
    if (num_missing > 0 && missing == nullptr) return fail_null("missing");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = new gradrec_mask{gradrec::SamplingMask(
            n, std::vector<std::size_t>(missing, missing + num_missing))};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_mask_length(const gradrec_mask* mask, size_t* out) {
    if (mask == nullptr) return fail_null("mask");
    if (out == nullptr) return fail_null("out");
    *out = mask->value.size();
    return GRADREC_OK;
}

gradrec_status gradrec_mask_num_missing(const gradrec_mask* mask, size_t* out) {
    if (mask == nullptr) return fail_null("mask");
    if (out == nullptr) return fail_null("out");
    *out = mask->value.num_missing();
    return GRADREC_OK;
}

gradrec_status gradrec_mask_copy_missing(const gradrec_mask* mask, size_t* buffer,
                                         size_t buffer_len) {
    if (mask == nullptr) return fail_null("mask");
    if (buffer == nullptr) return fail_null("buffer");
    if (buffer_len < mask->value.num_missing()) {
        return fail_invalid("buffer holds " + std::to_string(buffer_len) + " indices, need " +
                            std::to_string(mask->value.num_missing()));
    }
    std::memcpy(buffer, mask->value.missing().data(),
                mask->value.num_missing() * sizeof(size_t));
    return GRADREC_OK;
}

gradrec_status gradrec_mask_read_csv(const char* path, gradrec_mask** out) {
    if (path == nullptr) return fail_null("path");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_IO, [&] {
        *out = new gradrec_mask{gradrec::read_mask_csv(path)};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_mask_write_csv(const gradrec_mask* mask, const char* path) {
    if (mask == nullptr) return fail_null("mask");
    if (path == nullptr) return fail_null("path");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::write_mask_csv(path, mask->value);
        return GRADREC_OK;
    });
}

void gradrec_mask_free(gradrec_mask* mask) { delete mask; }

gradrec_status gradrec_mae(const gradrec_signal* a, const gradrec_signal* b, double* out) {
    if (a == nullptr || b == nullptr) return fail_null("signal");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = gradrec::mae(a->value, b->value);
        return GRADREC_OK;
    });
}

gradrec_status gradrec_snr_db(const gradrec_signal* reference, const gradrec_signal* test,
                              double* out) {
    if (reference == nullptr || test == nullptr) return fail_null("signal");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&]() -> gradrec_status {
        const auto value = gradrec::snr_db(reference->value, test->value);
        if (!value.has_value()) {
            set_error("signals are identical: SNR is infinite");
            return GRADREC_SNR_INFINITE;
        }
        *out = *value;
        return GRADREC_OK;
    });
}

gradrec_status gradrec_concentration_measure(const gradrec_signal* signal, double norm_p,
                                             double* out) {
    if (signal == nullptr) return fail_null("signal");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = gradrec::concentration_measure(gradrec::forward(signal->value),
                                              gradrec::NormOrder(norm_p));
        return GRADREC_OK;
    });
}

void gradrec_config_defaults(gradrec_config* config) {
    if (config == nullptr) return;
    config->d0 = 10.0;
    config->mu0 = 20.0;
    config->norm_p = 1.0;
    config->max_iterations = 320;
    config->amplitude_bound = 5.0;
    config->stage_length = 20;
    config->decay_factor = 10.0;
    config->schedule_enabled = 1;
    config->stop_step_threshold = 0.0;
}

gradrec_status gradrec_reconstruct(const gradrec_signal* observed, const gradrec_mask* mask,
                                   const gradrec_config* config, const gradrec_signal* reference,
                                   gradrec_result** out) {
    if (observed == nullptr) return fail_null("observed");
    if (mask == nullptr) return fail_null("mask");
    if (config == nullptr) return fail_null("config");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        const gradrec::RealSignal* ref = reference != nullptr ? &reference->value : nullptr;
        *out = new gradrec_result{
            gradrec::reconstruct(observed->value, mask->value, to_core_config(*config), ref)};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_result_signal(const gradrec_result* result, gradrec_signal** out) {
    if (result == nullptr) return fail_null("result");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = new gradrec_signal{result->value.signal};
        return GRADREC_OK;
    });
}

gradrec_status gradrec_result_trace_length(const gradrec_result* result, size_t* out) {
    if (result == nullptr) return fail_null("result");
    if (out == nullptr) return fail_null("out");
    *out = result->value.trace.rows.size();
    return GRADREC_OK;
}

gradrec_status gradrec_result_trace_row(const gradrec_result* result, size_t index,
                                        gradrec_trace_row* out) {
    if (result == nullptr) return fail_null("result");
    if (out == nullptr) return fail_null("out");
    if (index >= result->value.trace.rows.size()) {
        return fail_invalid("trace row " + std::to_string(index) + " out of range [0, " +
                            std::to_string(result->value.trace.rows.size()) + ")");
    }
    const gradrec::TraceRow& row = result->value.trace.rows[index];
    out->iteration = row.iteration;
    out->measure = row.measure;
    out->has_mae = row.mae.has_value() ? 1 : 0;
    out->mae = row.mae.value_or(std::numeric_limits<double>::quiet_NaN());
    out->d = row.step;
    out->mu = row.gain;
    return GRADREC_OK;
}

gradrec_status gradrec_result_write_trace_csv(const gradrec_result* result, const char* path) {
    if (result == nullptr) return fail_null("result");
    if (path == nullptr) return fail_null("path");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::write_trace_csv(path, result->value.trace);
        return GRADREC_OK;
    });
}

gradrec_status gradrec_result_mae_min(const gradrec_result* result, double* mae_min,
                                      uint64_t* iteration) {
    if (result == nullptr) return fail_null("result");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        const double best = result->value.trace.mae_min();
        if (mae_min != nullptr) *mae_min = best;
        if (iteration != nullptr) *iteration = result->value.trace.iteration_of_mae_min();
        return GRADREC_OK;
    });
}

gradrec_status gradrec_result_warning_count(const gradrec_result* result, size_t* out) {
    if (result == nullptr) return fail_null("result");
    if (out == nullptr) return fail_null("out");
    *out = result->value.warnings.size();
    return GRADREC_OK;
}

const char* gradrec_result_warning(const gradrec_result* result, size_t index) {
    if (result == nullptr || index >= result->value.warnings.size()) return nullptr;
    return result->value.warnings[index].c_str();
}

void gradrec_result_free(gradrec_result* result) { delete result; }

gradrec_status gradrec_brute_force_single(const gradrec_signal* observed,
                                          const gradrec_mask* mask, double norm_p,
                                          double amplitude_bound, double grid_step, double* out) {
    if (observed == nullptr) return fail_null("observed");
    if (mask == nullptr) return fail_null("mask");
    if (out == nullptr) return fail_null("out");
    return guarded(GRADREC_ERR_NUMERIC, [&] {
        *out = gradrec::brute_force_single_sample(observed->value, mask->value,
                                                  gradrec::NormOrder(norm_p), amplitude_bound,
                                                  grid_step);
        return GRADREC_OK;
    });
}

gradrec_status gradrec_run_parameter_sweep(const gradrec_sweep_spec* spec,
                                           const char* rows_csv_path,
                                           const char* summary_csv_path) {
    if (spec == nullptr) return fail_null("spec");
    if (rows_csv_path == nullptr) return fail_null("rows_csv_path");
    if (spec->num_components > 0 && (spec->amplitudes == nullptr || spec->cycles == nullptr)) {
        return fail_null("amplitudes/cycles");
    }
    if (spec->num_pairs > 0 && (spec->d0 == nullptr || spec->mu0 == nullptr)) {
        return fail_null("d0/mu0");
    }
    if (spec->num_missing_counts > 0 && spec->missing_counts == nullptr) {
        return fail_null("missing_counts");
    }
    if (spec->num_seeds > 0 && spec->seeds == nullptr) return fail_null("seeds");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::SweepSpec core;
        core.signal_length = spec->signal_length;
        core.components = to_components(spec->amplitudes, spec->cycles, spec->num_components);
        for (size_t i = 0; i < spec->num_pairs; ++i) {
            core.step_gain_pairs.emplace_back(spec->d0[i], spec->mu0[i]);
        }
        core.missing_counts.assign(spec->missing_counts,
                                   spec->missing_counts + spec->num_missing_counts);
        core.seeds.assign(spec->seeds, spec->seeds + spec->num_seeds);
        core.schedule.stage_length = spec->stage_length;
        core.schedule.decay_factor = spec->decay_factor;
        core.schedule.enabled = spec->schedule_enabled != 0;
        core.order = gradrec::NormOrder(spec->norm_p);
        core.max_iterations = spec->max_iterations;

        const gradrec::SweepResult result = gradrec::run_parameter_sweep(core);
        gradrec::write_sweep_csv(rows_csv_path, result);
        if (summary_csv_path != nullptr) {
            gradrec::write_sweep_summary_csv(summary_csv_path, gradrec::summarize(result));
        }
        return GRADREC_OK;
    });
}

gradrec_status gradrec_run_noise_sweep(const gradrec_noise_sweep_spec* spec,
                                       const char* rows_csv_path, const char* summary_csv_path) {
    if (spec == nullptr) return fail_null("spec");
    if (rows_csv_path == nullptr) return fail_null("rows_csv_path");
    if (spec->num_components > 0 && (spec->amplitudes == nullptr || spec->cycles == nullptr)) {
        return fail_null("amplitudes/cycles");
    }
    if (spec->num_variances > 0 && spec->variances == nullptr) return fail_null("variances");
    if (spec->num_missing_counts > 0 && spec->missing_counts == nullptr) {
        return fail_null("missing_counts");
    }
    if (spec->num_seeds > 0 && spec->seeds == nullptr) return fail_null("seeds");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::NoiseSweepSpec core;
        core.signal_length = spec->signal_length;
        core.components = to_components(spec->amplitudes, spec->cycles, spec->num_components);
        core.variances.assign(spec->variances, spec->variances + spec->num_variances);
        core.missing_counts.assign(spec->missing_counts,
                                   spec->missing_counts + spec->num_missing_counts);
        core.seeds.assign(spec->seeds, spec->seeds + spec->num_seeds);
        core.engine = to_core_config(spec->engine);

        const gradrec::SweepResult result = gradrec::run_noise_sweep(core);
        gradrec::write_sweep_csv(rows_csv_path, result);
        if (summary_csv_path != nullptr) {
            gradrec::write_sweep_summary_csv(summary_csv_path, gradrec::summarize(result));
        }
        return GRADREC_OK;
    });
}

gradrec_status gradrec_run_table1_sweep(const uint64_t* seeds, size_t num_seeds,
                                        const char* rows_csv_path,
                                        const char* summary_csv_path) {
    if (seeds == nullptr) return fail_null("seeds");
    if (rows_csv_path == nullptr) return fail_null("rows_csv_path");
    return guarded(GRADREC_ERR_IO, [&] {
        const auto spec = gradrec::table1_sweep_spec({seeds, num_seeds});
        const gradrec::SweepResult result = gradrec::run_parameter_sweep(spec);
        gradrec::write_sweep_csv(rows_csv_path, result);
        if (summary_csv_path != nullptr) {
            gradrec::write_sweep_summary_csv(summary_csv_path, gradrec::summarize(result));
        }
        return GRADREC_OK;
    });
}

gradrec_status gradrec_run_table2_sweep(const uint64_t* seeds, size_t num_seeds,
                                        const char* rows_csv_path,
                                        const char* summary_csv_path) {
    if (seeds == nullptr) return fail_null("seeds");
    if (rows_csv_path == nullptr) return fail_null("rows_csv_path");
    return guarded(GRADREC_ERR_IO, [&] {
        const auto spec = gradrec::table2_noise_spec({seeds, num_seeds});
        const gradrec::SweepResult result = gradrec::run_noise_sweep(spec);
        gradrec::write_sweep_csv(rows_csv_path, result);
        if (summary_csv_path != nullptr) {
            gradrec::write_sweep_summary_csv(summary_csv_path, gradrec::summarize(result));
        }
        return GRADREC_OK;
    });
}

gradrec_status gradrec_emit_case_study(const char* case_id, uint64_t seed,
                                       const char* trace_csv_path,
                                       const char* overlay_csv_path) {
    if (case_id == nullptr) return fail_null("case_id");
    if (trace_csv_path == nullptr) return fail_null("trace_csv_path");
    if (overlay_csv_path == nullptr) return fail_null("overlay_csv_path");
    return guarded(GRADREC_ERR_IO, [&] {
        gradrec::emit_case_study(gradrec::parse_case_id(case_id), seed, trace_csv_path,
                                 overlay_csv_path);
        return GRADREC_OK;
    });
}

} // extern "C"
