#include "rmtcorr/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace rmtcorr {

std::string_view kernel_name(Kernel k) {
    switch (k) {
        case Kernel::gaussian: return "gaussian";
        case Kernel::epanechnikov: return "epanechnikov";
    }
    return "unknown";
}

Kernel parse_kernel(std::string_view name) {
    if (name == "gaussian") return Kernel::gaussian;
    if (name == "epanechnikov") return Kernel::epanechnikov;
    throw Error("unknown kernel '" + std::string(name) + "'");
}

double msr(std::span<const Complex> eigenvalues) {
    if (eigenvalues.empty()) throw Error("msr: empty eigenvalue list");
    return les(eigenvalues, [](const Complex& l) { return std::abs(l); }) /
           static_cast<double>(eigenvalues.size());
}

double vsr(std::span<const Complex> eigenvalues) {
    if (eigenvalues.size() < 2) throw Error("vsr: need at least two eigenvalues");
    const double mean = msr(eigenvalues);
    double ss = 0.0;
    for (const Complex& l : eigenvalues) {
        const double d = std::abs(l) - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(eigenvalues.size() - 1);
}

double theoretical_msr(const RingLawParams& p) {
    // integral of r * (1/(pi c L)) r^(2/L - 2) * 2 pi r dr over [inner, 1]
    const double L = p.L();
    const double inner = ring_radii(p).inner;
    const double e = 2.0 / L + 1.0;
    return 2.0 / (p.c() * L) * (1.0 - std::pow(inner, e)) / e;
}

RingSpectrum ring_spectrum(std::vector<Complex> eigenvalues, const RingLawParams& p) {
    RingSpectrum out{std::move(eigenvalues), 0.0, 0.0, p};
    out.msr = msr(out.eigenvalues);
    out.vsr = vsr(out.eigenvalues);
    return out;
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) throw Error("kde: automatic bandwidth needs at least two eigenvalues");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double h = 1.06 * sd * std::pow(n, -0.2);
    if (!(h > 0.0)) throw Error("kde: automatic bandwidth is zero (all eigenvalues equal)");
    return h;
}

namespace {

double kernel_value(Kernel k, double u) {
    switch (k) {
        case Kernel::gaussian:
            return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
        case Kernel::epanechnikov:
            return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

}  // namespace

KdeCurve kde(std::span<const double> eigenvalues, std::optional<std::vector<double>> grid,
             std::optional<double> bandwidth, Kernel kernel) {
    if (eigenvalues.empty()) throw Error("kde: empty eigenvalue list");
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(eigenvalues);
    if (!(h > 0.0) || !std::isfinite(h)) throw Error("kde: bandwidth must be positive");

    KdeCurve out;
    out.bandwidth = h;
    out.kernel = kernel;
    if (grid) {
        if (!std::is_sorted(grid->begin(), grid->end())) throw Error("kde: grid must be ascending");
        out.grid = std::move(*grid);
    } else {
        const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
        const double a = *lo - 4.0 * h;
        const double b = *hi + 4.0 * h;
        constexpr int kPoints = 512;
        out.grid.resize(kPoints);
        for (int i = 0; i < kPoints; ++i) out.grid[i] = a + (b - a) * i / (kPoints - 1);
    }

    const double norm = 1.0 / (static_cast<double>(eigenvalues.size()) * h);
    out.density.resize(out.grid.size());
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
        double sum = 0.0;
        for (double l : eigenvalues) sum += kernel_value(kernel, (out.grid[g] - l) / h);
        out.density[g] = norm * sum;
    }
    return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("trapezoid: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

EsdComparison compare_with_mp(const CovarianceSpectrum& spectrum, std::optional<double> bandwidth) {
    EsdComparison out;
    out.kde = kde(spectrum.eigenvalues, std::nullopt, bandwidth);
    out.mp_density.reserve(out.kde.grid.size());
    for (double x : out.kde.grid) out.mp_density.push_back(mp_law_pdf(x, spectrum.params));
    return out;
}

}  // namespace rmtcorr
