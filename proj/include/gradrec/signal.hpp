#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace gradrec {

/// One sinusoidal component of a synthetic test signal: amplitude times
/// sin(2*pi*cycles*t/n). `cycles` must be an integer in [0, n/2) so the
/// component is not aliased.
struct Component {
    double amplitude = 0.0;
    int cycles = 0;
};

/// Length-N real-valued time-domain sample vector. Construction validates
/// that N >= 2 and every sample is finite; instances are immutable.
class RealSignal {
public:
    RealSignal() = default;
    explicit RealSignal(std::vector<double> samples);

    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::span<const double> samples() const noexcept { return samples_; }
    const std::vector<double>& data() const noexcept { return samples_; }

    bool operator==(const RealSignal&) const = default;

private:
    std::vector<double> samples_;
};

/// Partition of the index set {0..N-1} into available and missing samples.
/// Missing indices are kept sorted and distinct.
class SamplingMask {
public:
    SamplingMask() = default;
    SamplingMask(std::size_t n, std::vector<std::size_t> missing);

    static SamplingMask random(std::size_t n, std::size_t num_missing, std::uint64_t seed);

    std::size_t size() const noexcept { return n_; }
    std::size_t num_missing() const noexcept { return missing_.size(); }
    std::size_t num_available() const noexcept { return n_ - missing_.size(); }
    std::span<const std::size_t> missing() const noexcept { return missing_; }
    bool is_missing(std::size_t i) const noexcept { return flags_[i] != 0; }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> missing_;
    std::vector<char> flags_;
};

/// Additive Gaussian noise description. `variance` is in squared signal
/// amplitude units; the seed pins the exact realization.
struct NoiseSpec {
    double variance = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic random stream: mt19937_64 underneath, with the bounded
/// integer and Gaussian draws implemented here rather than through the
/// standard distributions, whose output is implementation defined. Two
/// builds of this library produce identical masks and noise for a seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no
    /// modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double next_canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, pairs cached).
    double next_gaussian();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Derives an independent substream seed from a run seed (splitmix64 mix).
/// Stream 0 is reserved for masks, stream 1 for noise, so the two draws of
/// one experiment run are reproducible in isolation.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Builds samples[t] = sum_c amplitude_c * sin(2*pi*cycles_c*t/n).
/// Rejects components with cycles outside [0, n/2).
RealSignal generate_test_signal(std::size_t n, std::span<const Component> components);

/// Uniformly drawn set of `num_missing` distinct missing indices.
SamplingMask random_mask(std::size_t n, std::size_t num_missing, std::uint64_t seed);

/// Returns signal + w, w i.i.d. zero-mean Gaussian with spec.variance.
/// The draw is sqrt(variance) times a standard normal stream, so noise at
/// variance v is exactly sqrt(v) times the noise at variance 1 for the
/// same seed.
RealSignal add_noise(const RealSignal& signal, const NoiseSpec& spec);

/// Mean absolute error (1/N) sum |a - b|. Lengths must match.
double mae(const RealSignal& a, const RealSignal& b);

/// 10*log10(sum reference^2 / sum (reference - test)^2). Returns nullopt
/// when the error energy is exactly zero (infinite SNR) instead of a number.
std::optional<double> snr_db(const RealSignal& reference, const RealSignal& test);

} // namespace gradrec
