#include "rmtcorr/rmt_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <lapacke.h>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

void RawMatrix::validate() const {
    if (values.rows() < 2 || values.cols() < 2) {
        std::ostringstream os;
        os << "raw matrix must be at least 2x2, got " << values.rows() << "x" << values.cols();
        throw Error(os.str());
    }
    if (!row_labels.empty() && static_cast<Eigen::Index>(row_labels.size()) != values.rows()) {
        throw Error("raw matrix: row label count does not match row count");
    }
    if (!time_labels.empty() && static_cast<Eigen::Index>(time_labels.size()) != values.cols()) {
        throw Error("raw matrix: time label count does not match column count");
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            if (!std::isfinite(values(i, j))) {
                std::ostringstream os;
                os << "non-finite entry at row " << i;
                if (!row_labels.empty()) os << " (" << row_labels[i] << ")";
                os << ", column " << j;
                if (!time_labels.empty()) os << " (time " << time_labels[j] << ")";
                throw Error(os.str());
            }
        }
    }
}

RingLawParams::RingLawParams(double c, int L) : c_(c), L_(L) {
    if (!(c > 0.0 && c <= 1.0)) {
        std::ostringstream os;
        os << "ring law: aspect ratio c must lie in (0, 1], got " << c;
        throw Error(os.str());
    }
    if (L < 1) throw Error("ring law: product length L must be >= 1");
}

RingLawParams RingLawParams::for_shape(Eigen::Index rows, Eigen::Index cols, int L) {
    if (cols <= 0) throw Error("ring law: window has no columns");
    return {static_cast<double>(rows) / static_cast<double>(cols), L};
}

MPLawParams::MPLawParams(double c, double d) : c_(c), d_(d) {
    if (!(c > 0.0 && c <= 1.0)) {
        std::ostringstream os;
        os << "M-P law: aspect ratio c must lie in (0, 1], got " << c;
        throw Error(os.str());
    }
    if (!(d > 0.0) || !std::isfinite(d)) throw Error("M-P law: variance d must be positive");
}

double MPLawParams::lower() const {
    const double s = 1.0 - std::sqrt(c_);
    return d_ * s * s;
}

double MPLawParams::upper() const {
    const double s = 1.0 + std::sqrt(c_);
    return d_ * s * s;
}

StandardMatrix standardize_rows(const RawMatrix& raw) {
    raw.validate();
    const Eigen::Index n = raw.values.rows();
    const Eigen::Index t = raw.values.cols();

    StandardMatrix out;
    out.values.resize(n, t);
    out.row_labels = raw.row_labels;
    out.time_labels = raw.time_labels;

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = raw.values.row(i);
        const double mean = row.mean();
        const double ss = (row.array() - mean).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(t - 1));
        const double scale = row.cwiseAbs().maxCoeff();
        if (sd <= 64.0 * kEps * scale || sd == 0.0) {
            out.values.row(i).setZero();
            out.constant_rows.push_back(i);
            continue;
        }
        out.values.row(i) = (row.array() - mean) / sd;
    }
    return out;
}

SquareComplexMatrix haar_unitary(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw Error("haar_unitary: dimension must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);

    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }

    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return {std::move(q), SquareKind::haar_unitary};
}

SquareComplexMatrix singular_value_equivalent(const StandardMatrix& x,
                                              const SquareComplexMatrix& u) {
    const Eigen::Index n = x.values.rows();
    if (u.values.rows() != n || u.values.cols() != n) {
        std::ostringstream os;
        os << "singular_value_equivalent: unitary is " << u.values.rows() << "x"
           << u.values.cols() << " but the data has " << n << " rows";
        throw Error(os.str());
    }
    const RealMatrix gram = x.values * x.values.transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
    if (es.info() != Eigen::Success) throw Error("singular_value_equivalent: eigensolver failed");

    // Round-off can leave eigenvalues at -1e-15.
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const RealMatrix& v = es.eigenvectors();
    const RealMatrix sqrt_gram = v * root.asDiagonal() * v.transpose();

    return {sqrt_gram.cast<Complex>() * u.values, SquareKind::singular_value_equivalent};
}

SquareComplexMatrix matrix_product(std::span<const SquareComplexMatrix> factors) {
    if (factors.empty()) throw Error("matrix_product: no factors");
    const Eigen::Index n = factors.front().values.rows();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i].values;
        if (f.rows() != n || f.cols() != n) {
            std::ostringstream os;
            os << "matrix_product: factor " << i << " is " << f.rows() << "x" << f.cols()
               << ", expected " << n << "x" << n;
            throw Error(os.str());
        }
    }
    ComplexMatrix z = factors.front().values;
    for (std::size_t i = 1; i < factors.size(); ++i) z = z * factors[i].values;
    return {std::move(z), SquareKind::matrix_product};
}

SquareComplexMatrix standardize_product(const SquareComplexMatrix& z) {
    const Eigen::Index n = z.values.rows();
    if (n < 2 || z.values.cols() != n) {
        throw Error("standardize_product: expected a square matrix with at least 2 rows");
    }
    ComplexMatrix out(n, n);
    const double root_n = std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = z.values.row(i);
        const Complex mean = row.mean();
        const double var = (row.array() - mean).abs2().sum() / static_cast<double>(n - 1);
        if (!(var > 0.0) || !std::isfinite(var)) {
            std::ostringstream os;
            os << "standardize_product: row " << i << " has zero variance";
            throw Error(os.str());
        }
        out.row(i) = row / (root_n * std::sqrt(var));
    }
    return {std::move(out), SquareKind::standard_matrix_product};
}

CovarianceMatrix sample_covariance(const SquareComplexMatrix& z) {
    ComplexMatrix s = z.values * z.values.adjoint();
    // Force exact Hermitian symmetry.
    const ComplexMatrix sym = (s + s.adjoint()) * 0.5;
    return {sym};
}

RingRadii ring_radii(const RingLawParams& p) {
    return {std::pow(1.0 - p.c(), 0.5 * p.L()), 1.0};
}

double ring_law_pdf(double radius, const RingLawParams& p) {
    if (radius < 0.0 || !std::isfinite(radius)) throw Error("ring_law_pdf: radius must be >= 0");
    const auto [inner, outer] = ring_radii(p);
    if (radius < inner || radius > outer) return 0.0;
    const double L = p.L();
    return std::pow(radius, 2.0 / L - 2.0) / (std::numbers::pi * p.c() * L);
}

double mp_law_pdf(double lambda, const MPLawParams& p) {
    const double a = p.lower();
    const double b = p.upper();
    if (lambda < a || lambda > b || lambda <= 0.0) return 0.0;
    return std::sqrt((b - lambda) * (lambda - a)) /
           (2.0 * std::numbers::pi * p.c() * p.d() * lambda);
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw Error("eigenvalues: matrix is not square");
    if (n == 0) return {};
    ComplexMatrix work = m;  // zgeev overwrites its input
    std::vector<Complex> w(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
    if (info != 0) {
        std::ostringstream os;
        os << "eigenvalues: zgeev failed with info=" << info;
        throw Error(os.str());
    }
    return w;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw Error("hermitian_eigenvalues: matrix is not square");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("hermitian_eigenvalues: eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace rmtcorr
