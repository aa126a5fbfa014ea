#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rmtcorr/error.hpp"
#include "rmtcorr/rmt_core.hpp"

namespace rmtcorr {

/// Eigenvalues of a standard matrix product with their mean spectral radius
/// (MSR) and variance of spectral radius (VSR).
struct RingSpectrum {
    std::vector<Complex> eigenvalues;
    double msr = 0.0;
    double vsr = 0.0;
    RingLawParams params{1.0, 1};
};

/// Real spectrum of a sample covariance matrix.
struct CovarianceSpectrum {
    std::vector<double> eigenvalues;
    MPLawParams params{1.0, 1.0};
};

enum class Kernel { gaussian, epanechnikov };

std::string_view kernel_name(Kernel k);
Kernel parse_kernel(std::string_view name);

struct KdeCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
    Kernel kernel = Kernel::gaussian;
};

/// Linear eigenvalue statistic: sum of phi over the eigenvalues.
template <class Phi>
double les(std::span<const Complex> eigenvalues, Phi&& phi) {
    if (eigenvalues.empty()) throw Error("les: empty eigenvalue list");
    double sum = 0.0;
    for (const Complex& l : eigenvalues) sum += static_cast<double>(phi(l));
    return sum;
}

double msr(std::span<const Complex> eigenvalues);

/// (1/(N-1)) sum (|l_i| - msr)^2. Needs at least two eigenvalues.
double vsr(std::span<const Complex> eigenvalues);

/// First radial moment of the Ring Law density, i.e. the MSR a pure-noise
/// window converges to. For L = 1 this is (2/(3c)) (1 - (1-c)^(3/2)).
double theoretical_msr(const RingLawParams& p);

RingSpectrum ring_spectrum(std::vector<Complex> eigenvalues, const RingLawParams& p);

/// Silverman's rule of thumb, 1.06 * sd * n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

/// Kernel density estimate (1/(n h)) sum K((x - l_i)/h) on `grid`. With no
/// grid, 512 equally spaced points spanning [min - 4h, max + 4h]; with no
/// bandwidth, Silverman's rule.
KdeCurve kde(std::span<const double> eigenvalues,
             std::optional<std::vector<double>> grid = std::nullopt,
             std::optional<double> bandwidth = std::nullopt,
             Kernel kernel = Kernel::gaussian);

/// Trapezoid-rule integral of a curve.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// KDE of a covariance spectrum next to the M-P density on the same grid.
struct EsdComparison {
    KdeCurve kde;
    std::vector<double> mp_density;
};

EsdComparison compare_with_mp(const CovarianceSpectrum& spectrum,
                              std::optional<double> bandwidth = std::nullopt);

}  // namespace rmtcorr
