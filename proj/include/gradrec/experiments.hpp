#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradrec/engine.hpp"
#include "gradrec/signal.hpp"

namespace gradrec {

/// Parameter sweep over (step, gain) pairs, missing-sample counts and mask
/// seeds on a noise-free synthetic signal.
struct SweepSpec {
    std::size_t signal_length = 128;
    std::vector<Component> components = {{3.0, 10}, {1.0, 15}};
    std::vector<std::pair<double, double>> step_gain_pairs;  ///< (d0, mu0)
    std::vector<std::size_t> missing_counts;
    std::vector<std::uint64_t> seeds;
    DecaySchedule schedule{};
    NormOrder order{};
    std::size_t max_iterations = 320;

    void validate() const;
};

/// Noise sweep: corrupt the clean signal, mask it, reconstruct with a fixed
/// engine configuration, and score against the clean signal.
struct NoiseSweepSpec {
    std::size_t signal_length = 128;
    std::vector<Component> components = {{3.0, 10}, {1.0, 15}};
    std::vector<double> variances;  ///< non-negative, ascending
    std::vector<std::size_t> missing_counts;
    std::vector<std::uint64_t> seeds;
    GradientConfig engine{};

    void validate() const;
};

/// One sweep run. `variance` is 0 for noise-free sweeps; `snr_db` is the
/// realized SNR of the noisy observation against the clean signal and is
/// absent for noise-free rows. A non-empty `error` flags a failed run; its
/// metric fields are then meaningless.
struct SweepRow {
    double d0 = 0.0;
    double mu0 = 0.0;
    std::size_t num_missing = 0;
    double variance = 0.0;
    std::uint64_t seed = 0;
    double mae_min = 0.0;
    std::size_t iter_of_min = 0;
    std::optional<double> snr_db;
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Medians over seeds, keyed by (d0, mu0, num_missing, variance). Failed
/// rows are excluded; num_seeds counts the rows aggregated.
struct SweepSummaryRow {
    double d0 = 0.0;
    double mu0 = 0.0;
    std::size_t num_missing = 0;
    double variance = 0.0;
    std::size_t num_seeds = 0;
    double median_mae_min = 0.0;
    double median_iter_of_min = 0.0;
    std::optional<double> median_snr_db;
};

/// Runs every (pair, missing count, seed) tuple. The mask seed is the run
/// seed verbatim, so any row can be reproduced with a single reconstruction
/// using the same seed. Engine errors are caught per row and flagged, not
/// propagated.
SweepResult run_parameter_sweep(const SweepSpec& spec);

/// Runs every (variance, missing count, seed) tuple. Noise is drawn from
/// the substream derive_stream_seed(seed, 1) so masks and noise are
/// independently reproducible.
SweepResult run_noise_sweep(const NoiseSweepSpec& spec);

std::vector<SweepSummaryRow> summarize(const SweepResult& result);

/// The four scripted case studies.
enum class CaseId {
    case1_constant,  ///< 64 missing, constant d=0.5, mu=1
    case1_adaptive,  ///< 64 missing, d0=5, mu0=10, /10 every 20 iterations
    case2,           ///< 94 missing, d0=20, mu0=40, /10 every 20 iterations
    case3,           ///< 64 missing, noise variance 0.1, d0=10, mu0=20
};

CaseId parse_case_id(std::string_view name);
std::string_view case_id_name(CaseId id);

struct CaseStudy {
    RealSignal original;
    std::optional<RealSignal> noisy;  ///< case3 only
    SamplingMask mask;
    ReconstructionResult result;
};

CaseStudy run_case_study(CaseId id, std::uint64_t seed);

/// Runs the case study and writes its convergence trace and the
/// original/available/reconstructed overlay (plus a noisy column for case3)
/// as CSV.
CaseStudy emit_case_study(CaseId id, std::uint64_t seed, const std::string& trace_path,
                          const std::string& overlay_path);

/// Sweep presets mirroring the library's reference experiment tables:
/// a 4-pair x {35,64,94} grid and a 9-variance x {30,50,64} noise grid.
SweepSpec table1_sweep_spec(std::span<const std::uint64_t> seeds);
NoiseSweepSpec table2_noise_spec(std::span<const std::uint64_t> seeds);

} // namespace gradrec
