#pragma once

// Factor matrices and augmented matrices. A factor vector c (one value per
// sampling time) is replicated k times, dressed with white noise whose
// magnitude is set by a target signal-to-noise ratio, and stacked under the
// status matrix.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rmtcorr/rmt_core.hpp"

namespace rmtcorr {

struct FactorSpec {
    std::string name;
    std::vector<double> values;
    int k = 59;
    double rho = 500.0;

    /// Throws unless k >= 1, rho > 0, values non-empty and finite. When
    /// `expected_length` is non-zero the vector must have that length.
    void validate(std::size_t expected_length = 0) const;
};

/// Replication count used when none is given: floor(n / 2).
int default_replication(Eigen::Index n_status);

struct FactorMatrix {
    RealMatrix values;  // C = D + m_e E
    double noise_magnitude = 0.0;
    std::uint64_t seed = 0;
};

struct AugmentedFrame {
    RealMatrix basic;   // B, n x t
    RealMatrix factor;  // C, k x t
    RealMatrix stacked; // A = [B; C]
    double noise_magnitude = 0.0;
    std::uint64_t seed = 0;
};

RealMatrix replicate_factor(std::span<const double> c, int k);

/// m_e = sqrt(Tr(D D^H) / (Tr(E E^H) rho)).
double noise_magnitude(const RealMatrix& d, const RealMatrix& e, double rho);

/// rho = Tr(D D^H) / (Tr(E E^H) m_e^2).
double snr(const RealMatrix& d, const RealMatrix& e, double m_e);

/// k x t matrix of i.i.d. standard normal entries, filled row by row.
RealMatrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

FactorMatrix build_factor_matrix(const FactorSpec& spec, std::uint64_t seed);

AugmentedFrame assemble_augmented(const RealMatrix& b, const FactorMatrix& c);

}  // namespace rmtcorr
