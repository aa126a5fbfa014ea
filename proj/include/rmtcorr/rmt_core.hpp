#pragma once

// Matrix transforms that turn a raw N x T data window into the standard
// matrix product used for Ring Law analysis, plus the closed-form limiting
// densities (Ring Law, Marchenko-Pastur) the spectra are compared against.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rmtcorr {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using TimeIndex = std::int64_t;

/// Raw N x T window. Rows are variables, columns are sampling times.
struct RawMatrix {
    RealMatrix values;
    std::vector<std::string> row_labels;
    std::vector<TimeIndex> time_labels;

    /// Throws unless N >= 2, T >= 2, labels match the shape and all entries
    /// are finite.
    void validate() const;
};

/// Row-standardized window: every non-constant row has mean 0 and sample
/// variance 1. Rows listed in `constant_rows` had zero spread and are zeros.
struct StandardMatrix {
    RealMatrix values;
    std::vector<std::string> row_labels;
    std::vector<TimeIndex> time_labels;
    std::vector<Eigen::Index> constant_rows;
};

enum class SquareKind {
    haar_unitary,
    singular_value_equivalent,
    matrix_product,
    standard_matrix_product,
};

struct SquareComplexMatrix {
    ComplexMatrix values;
    SquareKind kind;

    [[nodiscard]] Eigen::Index dim() const { return values.rows(); }
};

/// Hermitian positive semidefinite S = Z Z^H.
struct CovarianceMatrix {
    ComplexMatrix values;
};

class RingLawParams {
public:
    /// Throws unless 0 < c <= 1 and L >= 1.
    RingLawParams(double c, int L);

    /// Aspect ratio N / T of an analyzed window.
    static RingLawParams for_shape(Eigen::Index rows, Eigen::Index cols, int L);

    [[nodiscard]] double c() const { return c_; }
    [[nodiscard]] int L() const { return L_; }

private:
    double c_;
    int L_;
};

class MPLawParams {
public:
    /// Throws unless 0 < c <= 1 and d > 0.
    MPLawParams(double c, double d);

    [[nodiscard]] double c() const { return c_; }
    [[nodiscard]] double d() const { return d_; }
    /// Support bounds d(1 -/+ sqrt(c))^2.
    [[nodiscard]] double lower() const;
    [[nodiscard]] double upper() const;

private:
    double c_;
    double d_;
};

struct RingRadii {
    double inner;
    double outer;
};

StandardMatrix standardize_rows(const RawMatrix& raw);

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of diag(R) folded into Q. Deterministic in `seed`.
SquareComplexMatrix haar_unitary(Eigen::Index n, std::uint64_t seed);

/// X_u = sqrt(X X^H) U. Shares the singular values of `x`.
SquareComplexMatrix singular_value_equivalent(const StandardMatrix& x,
                                              const SquareComplexMatrix& u);

/// Ordered product of the factors; a single factor is returned unchanged.
SquareComplexMatrix matrix_product(std::span<const SquareComplexMatrix> factors);

/// Scales each row to z_i / (sqrt(N) sigma(z_i)) so that every row has
/// variance 1/N.
SquareComplexMatrix standardize_product(const SquareComplexMatrix& z);

CovarianceMatrix sample_covariance(const SquareComplexMatrix& z);

RingRadii ring_radii(const RingLawParams& p);

/// Limiting eigenvalue density of the standard matrix product, as a
/// function of modulus: (1 / (pi c L)) r^(2/L - 2) on the annulus.
double ring_law_pdf(double radius, const RingLawParams& p);

/// Limiting spectral density of the sample covariance matrix.
double mp_law_pdf(double lambda, const MPLawParams& p);

/// Eigenvalues of a general complex square matrix (LAPACK zgeev).
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace rmtcorr
