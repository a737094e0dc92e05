#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradrec/signal.hpp"
#include "gradrec/transform.hpp"

namespace gradrec {

/// Staged decay of the probe step and update gain: after every
/// `stage_length` iterations both are divided by `decay_factor`. Disabled
/// means constant parameters throughout.
struct DecaySchedule {
    std::size_t stage_length = 20;
    double decay_factor = 10.0;
    bool enabled = true;

    /// decay_factor^(iteration / stage_length), or 1 when disabled.
    /// Computed by repeated multiplication from the stage index each call,
    /// never by cumulative division across iterations, so the value at a
    /// given iteration is a pure function of the schedule.
    double scale_at(std::size_t iteration) const;

    void validate() const;
};

/// All knobs of the reconstruction loop.
struct GradientConfig {
    double initial_step = 10.0;   ///< probe step for the measure differences
    double initial_gain = 20.0;   ///< multiplier on the gradient update
    NormOrder order{};
    std::size_t max_iterations = 320;
    /// Half-width of the value range missing samples are assumed to live in.
    /// Used by the brute-force oracle and for runaway-iterate diagnostics.
    double amplitude_bound = 5.0;
    DecaySchedule schedule{};
    /// Optional early stop: end the loop once the current step falls below
    /// this threshold (further stages cannot move the iterate). 0 disables.
    double stop_step_threshold = 0.0;

    void validate() const;
};

/// Current iterate. Available samples keep the observed values bit for bit
/// at every iteration; only missing samples are ever rewritten.
struct ReconstructionState {
    RealSignal x;
    std::size_t iteration = 0;
    double current_step = 0.0;
    double current_gain = 0.0;
};

struct TraceRow {
    std::size_t iteration = 0;
    double measure = 0.0;
    std::optional<double> mae;  ///< against the reference, when one was given
    double step = 0.0;          ///< CSV column "d"
    double gain = 0.0;          ///< CSV column "mu"
};

/// Per-iteration record of a reconstruction run. Row 0 captures the state
/// right after initialization; row i the state after iteration i.
struct ConvergenceTrace {
    std::vector<TraceRow> rows;

    bool has_mae() const noexcept { return !rows.empty() && rows.front().mae.has_value(); }
    double mae_min() const;
    std::size_t iteration_of_mae_min() const;
};

struct ReconstructionResult {
    RealSignal signal;
    ConvergenceTrace trace;
    std::vector<std::string> warnings;
};

/// x(n) = observed(n) at available indices, 0 at missing ones; iteration 0;
/// step and gain at their initial values.
ReconstructionState initialize(const RealSignal& observed, const SamplingMask& mask,
                               const GradientConfig& config);

/// Gradient vector E over all N indices. For each missing index n_k,
///
///   E(n_k) = ( M[T[x + d*delta_{n_k}]] - M[T[x - d*delta_{n_k}]] ) / (2d)
///
/// and E is exactly 0 at available indices. `base` must be forward(state.x);
/// each probe is an incremental spectrum update, so one call costs one full
/// transform plus O(N) per missing sample.
std::vector<double> estimate_gradient(const ComplexSpectrum& base, const SamplingMask& mask,
                                      NormOrder order, double step);

/// Convenience overload that computes the base spectrum itself.
std::vector<double> estimate_gradient(const ReconstructionState& state, const SamplingMask& mask,
                                      NormOrder order, double step);

/// x <- x - gain * E, iteration incremented. Rejects a gradient with a
/// nonzero entry at an available index; available samples are returned
/// bit-identical. Step and gain carry over unchanged (the caller owns the
/// schedule).
ReconstructionState apply_step(const ReconstructionState& state, const SamplingMask& mask,
                               std::span<const double> gradient, double gain);

/// Full reconstruction loop: initialize, then max_iterations rounds of
/// estimate_gradient + apply_step with the decay schedule applied between
/// stages. Deterministic: identical inputs give bit-identical outputs.
/// Aborts with a diagnostic naming the iteration if an iterate goes
/// non-finite. The trace MAE column is filled only when `reference` is
/// non-null.
ReconstructionResult reconstruct(const RealSignal& observed, const SamplingMask& mask,
                                 const GradientConfig& config,
                                 const RealSignal* reference = nullptr);

/// Exhaustive scan over the grid v = -A, -A+step, ..., A for the single
/// missing sample value minimizing the concentration measure. Test oracle,
/// not a reconstruction path; requires exactly one missing index.
double brute_force_single_sample(const RealSignal& observed, const SamplingMask& mask,
                                 NormOrder order, double amplitude_bound, double grid_step);

} // namespace gradrec
