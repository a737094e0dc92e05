#pragma once

#include <span>
#include <string>

#include "gradrec/engine.hpp"
#include "gradrec/experiments.hpp"
#include "gradrec/signal.hpp"

namespace gradrec {

/// All writers accept "-" as the path to mean standard output. Values are
/// written with 17 significant digits so files round-trip doubles exactly.
std::string format_double(double value);

/// Signal file: header `index,value`, one row per sample.
void write_signal_csv(const std::string& path, const RealSignal& signal);
RealSignal read_signal_csv(const std::string& path);

/// Mask file: header `index,available`, available in {0,1}.
void write_mask_csv(const std::string& path, const SamplingMask& mask);
SamplingMask read_mask_csv(const std::string& path);

/// Trace file: header `iteration,measure,mae,d,mu`; the mae cell is empty
/// when the run had no reference signal.
void write_trace_csv(const std::string& path, const ConvergenceTrace& trace);

/// Overlay file with columns `index,original,noisy,available,reconstructed`.
/// The noisy column is present only when `noisy` is non-null; the available
/// cell is empty at missing indices.
void write_overlay_csv(const std::string& path, const RealSignal& original,
                       const RealSignal* noisy, const SamplingMask& mask,
                       const RealSignal& reconstructed);

/// Sweep rows: header `d0,mu0,num_missing,variance,seed,mae_min,iter_of_min,snr_db`.
/// Failed rows leave the metric cells empty.
void write_sweep_csv(const std::string& path, const SweepResult& result);

/// Summary rows keyed by (d0, mu0, num_missing, variance).
void write_sweep_summary_csv(const std::string& path, std::span<const SweepSummaryRow> rows);

} // namespace gradrec
