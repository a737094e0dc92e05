#include "gradrec/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gradrec {

double DecaySchedule::scale_at(std::size_t iteration) const {
    if (!enabled) return 1.0;
    const std::size_t stage = iteration / stage_length;
    double scale = 1.0;
    for (std::size_t i = 0; i < stage; ++i) scale *= decay_factor;
    return scale;
}

void DecaySchedule::validate() const {
    if (stage_length == 0) {
        throw std::invalid_argument("schedule stage length must be >= 1");
    }
    if (enabled && (!(decay_factor > 1.0) || !std::isfinite(decay_factor))) {
        throw std::invalid_argument("decay factor must be finite and > 1, got " +
                                    std::to_string(decay_factor));
    }
}

void GradientConfig::validate() const {
    if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
        throw std::invalid_argument("initial step must be finite and > 0");
    }
    if (!(initial_gain > 0.0) || !std::isfinite(initial_gain)) {
        throw std::invalid_argument("initial gain must be finite and > 0");
    }
    if (max_iterations == 0) {
        throw std::invalid_argument("iteration budget must be >= 1");
    }
    if (!(amplitude_bound > 0.0) || !std::isfinite(amplitude_bound)) {
        throw std::invalid_argument("amplitude bound must be finite and > 0");
    }
    if (stop_step_threshold < 0.0 || !std::isfinite(stop_step_threshold)) {
        throw std::invalid_argument("stop threshold must be finite and >= 0");
    }
    schedule.validate();
}

double ConvergenceTrace::mae_min() const {
    if (!has_mae()) {
        throw std::logic_error("trace has no MAE column (no reference was supplied)");
    }
    double best = rows.front().mae.value();
    for (const TraceRow& row : rows) best = std::min(best, row.mae.value());
    return best;
}

std::size_t ConvergenceTrace::iteration_of_mae_min() const {
    const double best = mae_min();
    for (const TraceRow& row : rows) {
        if (row.mae.value() == best) return row.iteration;
    }
    return rows.back().iteration;  // unreachable, mae_min comes from the rows
}

ReconstructionState initialize(const RealSignal& observed, const SamplingMask& mask,
                               const GradientConfig& config) {
    if (observed.size() != mask.size()) {
        throw std::invalid_argument("signal length " + std::to_string(observed.size()) +
                                    " does not match mask length " + std::to_string(mask.size()));
    }
    config.validate();
    std::vector<double> x(observed.data());
    for (std::size_t index : mask.missing()) x[index] = 0.0;
    return ReconstructionState{RealSignal(std::move(x)), 0, config.initial_step,
                               config.initial_gain};
}

std::vector<double> estimate_gradient(const ComplexSpectrum& base, const SamplingMask& mask,
                                      NormOrder order, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("gradient probe step must be finite and > 0");
    }
    if (base.size() != mask.size()) {
        throw std::invalid_argument("spectrum length does not match mask length");
    }
    std::vector<double> gradient(mask.size(), 0.0);
    for (std::size_t index : mask.missing()) {
        const double up = perturbed_measure(base, index, step, order);
        const double down = perturbed_measure(base, index, -step, order);
        gradient[index] = (up - down) / (2.0 * step);
    }
    return gradient;
}

std::vector<double> estimate_gradient(const ReconstructionState& state, const SamplingMask& mask,
                                      NormOrder order, double step) {
    return estimate_gradient(forward(state.x), mask, order, step);
}

ReconstructionState apply_step(const ReconstructionState& state, const SamplingMask& mask,
                               std::span<const double> gradient, double gain) {
    if (gradient.size() != state.x.size() || mask.size() != state.x.size()) {
        throw std::invalid_argument("gradient/mask length does not match the iterate");
    }
    for (std::size_t i = 0; i < gradient.size(); ++i) {
        if (!mask.is_missing(i) && gradient[i] != 0.0) {
            throw std::invalid_argument("gradient has a nonzero entry at available index " +
                                        std::to_string(i));
        }
    }
    std::vector<double> x(state.x.data());
    for (std::size_t index : mask.missing()) {
        x[index] -= gain * gradient[index];
    }
    return ReconstructionState{RealSignal(std::move(x)), state.iteration + 1,
                               state.current_step, state.current_gain};
}

ReconstructionResult reconstruct(const RealSignal& observed, const SamplingMask& mask,
                                 const GradientConfig& config, const RealSignal* reference) {
    if (reference != nullptr && reference->size() != observed.size()) {
        throw std::invalid_argument("reference length does not match the observed signal");
    }
    ReconstructionState state = initialize(observed, mask, config);
    const std::size_t n = observed.size();

    std::vector<std::string> warnings;
    if (mask.num_missing() == n) {
        warnings.push_back("every sample is missing; reconstructing from an all-zero start "
                           "with no data constraints");
    }

    ConvergenceTrace trace;
    trace.rows.reserve(config.max_iterations + 1);
    auto record = [&](const ReconstructionState& s, const ComplexSpectrum& spectrum) {
        TraceRow row;
        row.iteration = s.iteration;
        row.measure = concentration_measure(spectrum, config.order);
        if (reference != nullptr) row.mae = mae(s.x, *reference);
        row.step = s.current_step;
        row.gain = s.current_gain;
        trace.rows.push_back(row);
    };

    ComplexSpectrum spectrum = forward(state.x);
    record(state, spectrum);

    bool runaway_reported = false;
    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        if (config.stop_step_threshold > 0.0 &&
            state.current_step < config.stop_step_threshold) {
            break;
        }
        if (state.current_step == 0.0) {
            throw std::runtime_error("the decayed step underflowed to zero before iteration " +
                                     std::to_string(iteration) +
                                     "; shorten the schedule or set stop_step_threshold");
        }
        const std::vector<double> gradient =
            estimate_gradient(spectrum, mask, config.order, state.current_step);
        try {
            state = apply_step(state, mask, gradient, state.current_gain);
        } catch (const std::invalid_argument& e) {
            // the iterate type validates finiteness on construction; name the
            // iteration so a diverging run is diagnosable
            throw std::runtime_error("iteration " + std::to_string(iteration) +
                                     " produced a non-finite iterate: " + e.what());
        }
        const double scale = config.schedule.scale_at(state.iteration);
        state.current_step = config.initial_step / scale;
        state.current_gain = config.initial_gain / scale;

        double max_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            max_abs = std::max(max_abs, std::abs(state.x[i]));
        }
        if (!runaway_reported && max_abs > 10.0 * config.amplitude_bound) {
            warnings.push_back("iterate magnitude " + std::to_string(max_abs) +
                               " exceeded 10x the amplitude bound at iteration " +
                               std::to_string(iteration) + "; step/gain look too large");
            runaway_reported = true;
        }

        spectrum = forward(state.x);
        record(state, spectrum);
    }

    return ReconstructionResult{std::move(state.x), std::move(trace), std::move(warnings)};
}

double brute_force_single_sample(const RealSignal& observed, const SamplingMask& mask,
                                 NormOrder order, double amplitude_bound, double grid_step) {
    if (mask.num_missing() != 1) {
        throw std::invalid_argument("brute-force search requires exactly 1 missing index, got " +
                                    std::to_string(mask.num_missing()));
    }
    if (observed.size() != mask.size()) {
        throw std::invalid_argument("signal length does not match mask length");
    }
    if (!(grid_step > 0.0) || !(amplitude_bound > 0.0)) {
        throw std::invalid_argument("grid step and amplitude bound must be > 0");
    }
    const std::size_t index = mask.missing()[0];

    // Zero the missing sample once; every grid value is then a rank-one
    // perturbation of this base spectrum.
    std::vector<double> x(observed.data());
    x[index] = 0.0;
    const ComplexSpectrum base = forward(RealSignal(std::move(x)));

    double best_value = -amplitude_bound;
    double best_measure = perturbed_measure(base, index, best_value, order);
    const auto count = static_cast<std::size_t>(2.0 * amplitude_bound / grid_step) + 1;
    for (std::size_t k = 1; k < count; ++k) {
        const double value = -amplitude_bound + static_cast<double>(k) * grid_step;
        const double m = perturbed_measure(base, index, value, order);
        if (m < best_measure) {
            best_measure = m;
            best_value = value;
        }
    }
    return best_value;
}

} // namespace gradrec
