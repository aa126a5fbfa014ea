#include "rmtcorr/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

void FactorSpec::validate(std::size_t expected_length) const {
    if (k < 1) throw Error("factor '" + name + "': k must be >= 1");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("factor '" + name + "': rho must be positive");
    if (values.empty()) throw Error("factor '" + name + "': no values");
    if (expected_length != 0 && values.size() != expected_length) {
        std::ostringstream os;
        os << "factor '" << name << "': has " << values.size() << " samples, status matrix has "
           << expected_length;
        throw Error(os.str());
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j])) {
            std::ostringstream os;
            os << "factor '" << name << "': non-finite value at column " << j;
            throw Error(os.str());
        }
    }
}

int default_replication(Eigen::Index n_status) {
    return static_cast<int>(std::max<Eigen::Index>(1, n_status / 2));
}

RealMatrix replicate_factor(std::span<const double> c, int k) {
    if (k < 1) throw Error("replicate_factor: k must be >= 1");
    if (c.empty()) throw Error("replicate_factor: empty factor vector");
    const Eigen::Map<const Eigen::RowVectorXd> row(c.data(), static_cast<Eigen::Index>(c.size()));
    return row.replicate(k, 1);
}

double noise_magnitude(const RealMatrix& d, const RealMatrix& e, double rho) {
    if (d.rows() != e.rows() || d.cols() != e.cols()) {
        throw Error("noise_magnitude: factor and noise matrices differ in shape");
    }
    if (!(rho > 0.0)) throw Error("noise_magnitude: rho must be positive");
    const double tr_e = e.squaredNorm();
    if (!(tr_e > 0.0)) throw Error("noise_magnitude: noise matrix is all zero");
    const double tr_d = d.squaredNorm();
    if (!(tr_d > 0.0)) throw Error("noise_magnitude: factor matrix is all zero, SNR undefined");
    return std::sqrt(tr_d / (tr_e * rho));
}

double snr(const RealMatrix& d, const RealMatrix& e, double m_e) {
    if (!(m_e > 0.0)) throw Error("snr: noise magnitude must be positive");
    const double tr_e = e.squaredNorm();
    if (!(tr_e > 0.0)) throw Error("snr: noise matrix is all zero");
    return d.squaredNorm() / (tr_e * m_e * m_e);
}

RealMatrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix e(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) e(i, j) = normal(rng);
    return e;
}

FactorMatrix build_factor_matrix(const FactorSpec& spec, std::uint64_t seed) {
    spec.validate();
    const RealMatrix d = replicate_factor(spec.values, spec.k);
    const RealMatrix e = standard_normal_matrix(d.rows(), d.cols(), seed);
    const double m_e = noise_magnitude(d, e, spec.rho);
    return {d + m_e * e, m_e, seed};
}

AugmentedFrame assemble_augmented(const RealMatrix& b, const FactorMatrix& c) {
    if (b.cols() != c.values.cols()) {
        std::ostringstream os;
        os << "assemble_augmented: status matrix has " << b.cols() << " columns, factor matrix has "
           << c.values.cols();
        throw Error(os.str());
    }
    AugmentedFrame out;
    out.basic = b;
    out.factor = c.values;
    out.stacked.resize(b.rows() + c.values.rows(), b.cols());
    out.stacked.topRows(b.rows()) = b;
    out.stacked.bottomRows(c.values.rows()) = c.values;
    out.noise_magnitude = c.noise_magnitude;
    out.seed = c.seed;
    return out;
}

}  // namespace rmtcorr
