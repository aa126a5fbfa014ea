#pragma once

// Synthetic replay of the four load-signal cases on a linear-sensitivity
// surrogate of a 118-bus grid. Status data are bus voltage magnitudes;
// factor data are active loads sampled every `factor_sample_stride` steps
// and held in between.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmtcorr/pipeline.hpp"

namespace rmtcorr {

enum class ShapeKind { constant, step, pulse, staircase };

std::string shape_kind_name(ShapeKind k);

struct Segment {
    TimeIndex start = 1;  // inclusive, 1-based
    TimeIndex end = 1;    // inclusive
    double level = 0.0;   // MW
};

struct SignalShape {
    ShapeKind kind = ShapeKind::constant;
    std::vector<Segment> segments;

    /// Throws unless the segments tile [1, horizon] in order with finite levels.
    void validate(TimeIndex horizon) const;
    [[nodiscard]] double level_at(TimeIndex t) const;
};

struct ScenarioSpec {
    int case_id = 0;  // 0 for hand-built scenarios
    Eigen::Index n_status = 118;
    TimeIndex horizon = 1000;
    std::vector<std::pair<std::string, SignalShape>> factors;
    int factor_sample_stride = 50;
    /// Relative white-noise magnitude: per-unit on voltages, fraction of the
    /// load level on factor samples.
    double noise_level = 1e-4;
    std::uint64_t sensitivity_seed = 118;
    std::uint64_t noise_seed = 2016;

    void validate() const;
    /// Load level at t = 1, the operating point the surrogate is linearized at.
    [[nodiscard]] double base_load(const std::string& factor) const;
};

struct SurrogateModel {
    std::vector<std::string> factor_names;
    RealMatrix sensitivity;    // n_status x n_factors, p.u. per MW
    Eigen::VectorXd baseline;  // p.u.
};

/// Sensitivity magnitude of the strongly coupled rows, p.u. per MW.
inline constexpr double kStrongSensitivity = 5e-4;
/// Number of rows each factor drives strongly.
inline constexpr Eigen::Index kResponseBlock = 20;

/// Each factor drives a contiguous block of rows strongly, with an
/// exponentially decaying spillover to its neighbours. A factor named
/// "bus<k>" centers its block on row k; other names take a seeded center.
SurrogateModel build_surrogate(Eigen::Index n_status, const std::vector<std::string>& factor_names,
                               std::uint64_t sensitivity_seed);

struct ScenarioData {
    DataSource status;                  // voltage magnitudes, n_status x horizon
    std::vector<FactorSpec> factors;    // measured loads (k, rho left at defaults)
    std::vector<std::vector<double>> true_loads;  // noiseless factor timelines
};

ScenarioData generate(const ScenarioSpec& spec, const SurrogateModel& model);
ScenarioData generate(const ScenarioSpec& spec);

/// The load schedules of cases 1 to 4 (bus 117 and bus 54).
ScenarioSpec preset(int case_id);

}  // namespace rmtcorr
