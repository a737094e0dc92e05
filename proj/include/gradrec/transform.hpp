#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gradrec/signal.hpp"

namespace gradrec {

/// Norm parameter of the concentration measure, p >= 1.
struct NormOrder {
    double p = 1.0;

    NormOrder() = default;
    explicit NormOrder(double order);
};

/// Length-N complex transform-domain vector.
class ComplexSpectrum {
public:
    ComplexSpectrum() = default;
    explicit ComplexSpectrum(std::vector<std::complex<double>> bins);

    std::size_t size() const noexcept { return bins_.size(); }
    const std::complex<double>& operator[](std::size_t i) const noexcept { return bins_[i]; }
    std::span<const std::complex<double>> bins() const noexcept { return bins_; }

private:
    std::vector<std::complex<double>> bins_;
};

/// Unnormalized forward DFT: bins[k] = sum_n samples[n] * exp(-j*2*pi*k*n/N).
/// Direct O(N^2) evaluation with a precomputed twiddle table; at the signal
/// lengths this library targets that is faster to get exactly right than an
/// FFT is worth.
ComplexSpectrum forward(const RealSignal& signal);

/// Inverse DFT with 1/N normalization. The spectrum must be conjugate
/// symmetric (come from a real signal); an imaginary residue above tolerance
/// is rejected, a residue below it is discarded.
RealSignal inverse(const ComplexSpectrum& spectrum);

/// True when bins[k] == conj(bins[N-k mod N]) within the relative tolerance.
bool is_conjugate_symmetric(const ComplexSpectrum& spectrum, double rel_tol = 1e-12);

/// Spectrum of the signal with `delta` added at one time index, computed
/// incrementally from the base spectrum:
///
///   bins'[k] = bins[k] + delta * exp(-j*2*pi*k*index/N)
///
/// which is an O(N) update instead of an O(N^2) retransform. Matches the
/// full recomputation to better than 1e-10 per bin.
ComplexSpectrum perturbed_spectrum(const ComplexSpectrum& base, std::size_t index, double delta);

/// Concentration measure M = (1/N) sum_i |S(i)|^(1/p). At p = 1 this is the
/// mean absolute spectral magnitude; a sparser spectrum of equal energy has
/// a smaller measure.
double concentration_measure(const ComplexSpectrum& spectrum, NormOrder order = {});

/// concentration_measure(perturbed_spectrum(base, index, delta), order)
/// without materializing the perturbed spectrum. This is the hot path of
/// gradient estimation.
double perturbed_measure(const ComplexSpectrum& base, std::size_t index, double delta,
                         NormOrder order = {});

} // namespace gradrec
