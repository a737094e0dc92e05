#include "gradrec/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gradrec {

namespace {

// Twiddle table: roots[r] = exp(-j*2*pi*r/n). Every DFT phase in this module
// is some root at index (k*n_idx) mod n, so one table serves the forward
// transform, the inverse (conjugated) and the rank-one perturbation update.
// Cached per thread keyed on n; gradient estimation calls into here twice
// per missing sample per iteration.
const std::vector<std::complex<double>>& twiddle_table(std::size_t n) {
    thread_local std::vector<std::complex<double>> roots;
    if (roots.size() != n) {
        roots.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) /
                                 static_cast<double>(n);
            roots[r] = {std::cos(angle), std::sin(angle)};
        }
    }
    return roots;
}

} // namespace

NormOrder::NormOrder(double order) : p(order) {
    if (!(order >= 1.0) || !std::isfinite(order)) {
        throw std::invalid_argument("norm order must be finite and >= 1, got " +
                                    std::to_string(order));
    }
}

ComplexSpectrum::ComplexSpectrum(std::vector<std::complex<double>> bins)
    : bins_(std::move(bins)) {
    if (bins_.size() < 2) {
        throw std::invalid_argument("spectrum must have at least 2 bins");
    }
}

ComplexSpectrum forward(const RealSignal& signal) {
    const std::size_t n = signal.size();
    const auto& roots = twiddle_table(n);
    std::vector<std::complex<double>> bins(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::complex<double>& w = roots[(k * t) % n];
            re += signal[t] * w.real();
            im += signal[t] * w.imag();
        }
        bins[k] = {re, im};
    }
    return ComplexSpectrum(std::move(bins));
}

RealSignal inverse(const ComplexSpectrum& spectrum) {
    const std::size_t n = spectrum.size();
    const auto& roots = twiddle_table(n);
    std::vector<double> samples(n);
    double max_imag = 0.0;
    double max_real = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            // conj(roots[r]) = exp(+j*2*pi*r/n)
            const std::complex<double>& w = roots[(k * t) % n];
            re += spectrum[k].real() * w.real() + spectrum[k].imag() * w.imag();
            im += spectrum[k].imag() * w.real() - spectrum[k].real() * w.imag();
        }
        samples[t] = re / static_cast<double>(n);
        max_imag = std::max(max_imag, std::abs(im) / static_cast<double>(n));
        max_real = std::max(max_real, std::abs(samples[t]));
    }
    const double tolerance = 1e-10 * std::max(1.0, max_real);
    if (max_imag > tolerance) {
        throw std::invalid_argument(
            "spectrum is not conjugate symmetric: inverse transform has imaginary residue " +
            std::to_string(max_imag));
    }
    return RealSignal(std::move(samples));
}

bool is_conjugate_symmetric(const ComplexSpectrum& spectrum, double rel_tol) {
    const std::size_t n = spectrum.size();
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(spectrum[k]));
    const double tolerance = rel_tol * std::max(1.0, scale);
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> mirror = std::conj(spectrum[(n - k) % n]);
        if (std::abs(spectrum[k] - mirror) > tolerance) return false;
    }
    return true;
}

ComplexSpectrum perturbed_spectrum(const ComplexSpectrum& base, std::size_t index, double delta) {
    const std::size_t n = base.size();
    if (index >= n) {
        throw std::invalid_argument("perturbation index " + std::to_string(index) +
                                    " out of range [0, " + std::to_string(n) + ")");
    }
    const auto& roots = twiddle_table(n);
    std::vector<std::complex<double>> bins(n);
    for (std::size_t k = 0; k < n; ++k) {
        bins[k] = base[k] + delta * roots[(k * index) % n];
    }
    return ComplexSpectrum(std::move(bins));
}

double concentration_measure(const ComplexSpectrum& spectrum, NormOrder order) {
    const std::size_t n = spectrum.size();
    double sum = 0.0;
    if (order.p == 1.0) {
        for (std::size_t k = 0; k < n; ++k) sum += std::abs(spectrum[k]);
    } else {
        const double exponent = 1.0 / order.p;
        for (std::size_t k = 0; k < n; ++k) sum += std::pow(std::abs(spectrum[k]), exponent);
    }
    return sum / static_cast<double>(n);
}

double perturbed_measure(const ComplexSpectrum& base, std::size_t index, double delta,
                         NormOrder order) {
    const std::size_t n = base.size();
    if (index >= n) {
        throw std::invalid_argument("perturbation index " + std::to_string(index) +
                                    " out of range [0, " + std::to_string(n) + ")");
    }
    const auto& roots = twiddle_table(n);
    double sum = 0.0;
    if (order.p == 1.0) {
        for (std::size_t k = 0; k < n; ++k) {
            sum += std::abs(base[k] + delta * roots[(k * index) % n]);
        }
    } else {
        const double exponent = 1.0 / order.p;
        for (std::size_t k = 0; k < n; ++k) {
            sum += std::pow(std::abs(base[k] + delta * roots[(k * index) % n]), exponent);
        }
    }
    return sum / static_cast<double>(n);
}

} // namespace gradrec
