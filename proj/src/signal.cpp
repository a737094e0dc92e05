#include "gradrec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gradrec {

RealSignal::RealSignal(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) {
        throw std::invalid_argument("signal must have at least 2 samples, got " +
                                    std::to_string(samples_.size()));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i])) {
            throw std::invalid_argument("signal sample " + std::to_string(i) + " is not finite");
        }
    }
}

SamplingMask::SamplingMask(std::size_t n, std::vector<std::size_t> missing)
    : n_(n), missing_(std::move(missing)), flags_(n, 0) {
    if (n < 2) {
        throw std::invalid_argument("mask length must be at least 2, got " + std::to_string(n));
    }
    std::sort(missing_.begin(), missing_.end());
    for (std::size_t i = 0; i < missing_.size(); ++i) {
        if (missing_[i] >= n_) {
            throw std::invalid_argument("missing index " + std::to_string(missing_[i]) +
                                        " out of range [0, " + std::to_string(n_) + ")");
        }
        if (i > 0 && missing_[i] == missing_[i - 1]) {
            throw std::invalid_argument("duplicate missing index " + std::to_string(missing_[i]));
        }
        flags_[missing_[i]] = 1;
    }
}

SamplingMask SamplingMask::random(std::size_t n, std::size_t num_missing, std::uint64_t seed) {
    if (num_missing > n) {
        throw std::invalid_argument("cannot mark " + std::to_string(num_missing) +
                                    " samples missing out of " + std::to_string(n));
    }
    // Partial Fisher-Yates: the first num_missing slots end up a uniform
    // draw without replacement.
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    RandomStream rng(seed);
    for (std::size_t i = 0; i < num_missing; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(num_missing);
    return SamplingMask(n, std::move(indices));
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("next_below requires a positive bound");
    }
    // Reject the low remainder zone so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

double RandomStream::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_canonical();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the (seed, stream) pair.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RealSignal generate_test_signal(std::size_t n, std::span<const Component> components) {
    if (n < 2) {
        throw std::invalid_argument("signal length must be at least 2, got " + std::to_string(n));
    }
    for (const Component& c : components) {
        if (c.cycles < 0 || static_cast<double>(c.cycles) >= static_cast<double>(n) / 2.0) {
            throw std::invalid_argument(
                "component with " + std::to_string(c.cycles) +
                " cycles is aliased for length " + std::to_string(n) +
                "; cycles must lie in [0, n/2)");
        }
        if (!std::isfinite(c.amplitude)) {
            throw std::invalid_argument("component amplitude is not finite");
        }
    }
    std::vector<double> samples(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double value = 0.0;
        for (const Component& c : components) {
            value += c.amplitude * std::sin(2.0 * std::numbers::pi * c.cycles *
                                            static_cast<double>(t) / static_cast<double>(n));
        }
        samples[t] = value;
    }
    return RealSignal(std::move(samples));
}

SamplingMask random_mask(std::size_t n, std::size_t num_missing, std::uint64_t seed) {
    return SamplingMask::random(n, num_missing, seed);
}

RealSignal add_noise(const RealSignal& signal, const NoiseSpec& spec) {
    if (!(spec.variance >= 0.0) || !std::isfinite(spec.variance)) {
        throw std::invalid_argument("noise variance must be finite and >= 0");
    }
    // Scale a standard normal stream so that draws at variance v are exactly
    // sqrt(v) times the draws at variance 1 under the same seed.
    const double scale = std::sqrt(spec.variance);
    RandomStream rng(spec.seed);
    std::vector<double> noisy(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        noisy[i] = signal[i] + scale * rng.next_gaussian();
    }
    return RealSignal(std::move(noisy));
}

double mae(const RealSignal& a, const RealSignal& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("mae requires equal lengths, got " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum / static_cast<double>(a.size());
}

std::optional<double> snr_db(const RealSignal& reference, const RealSignal& test) {
    if (reference.size() != test.size()) {
        throw std::invalid_argument("snr_db requires equal lengths, got " +
                                    std::to_string(reference.size()) + " and " +
                                    std::to_string(test.size()));
    }
    double signal_energy = 0.0;
    double error_energy = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        signal_energy += reference[i] * reference[i];
        const double e = reference[i] - test[i];
        error_energy += e * e;
    }
    if (error_energy == 0.0) {
        return std::nullopt;  // infinite SNR, reported as a condition not a number
    }
    return 10.0 * std::log10(signal_energy / error_energy);
}

} // namespace gradrec
