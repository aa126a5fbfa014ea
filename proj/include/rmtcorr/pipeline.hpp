#pragma once

// Real-time split-window analysis: each sampling time t_i (t_i >= T) is
// analyzed on the T most recent columns of the data source. The status-only
// MSR series locates signal areas; augmenting the status matrix with one
// factor at a time attributes those signals to factors.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmtcorr/augmented.hpp"
#include "rmtcorr/indicators.hpp"
#include "rmtcorr/rmt_core.hpp"

namespace rmtcorr {

/// Data source Omega: rows are variables, columns are sampling times.
struct DataSource {
    std::vector<std::string> variables;
    std::vector<TimeIndex> times;
    RealMatrix values;

    /// Throws unless labels match the shape, times strictly increase and all
    /// entries are finite.
    void validate() const;
    [[nodiscard]] Eigen::Index rows() const { return values.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return values.cols(); }
};

struct WindowConfig {
    int T = 240;  // window length
    int L = 1;    // product length

    void validate() const;
};

/// Hysteresis of the excursion detector: `open_run` consecutive samples
/// below the inner radius open an area, `close_run` consecutive samples back
/// inside the ring close it.
struct DetectionConfig {
    int open_run = 3;
    int close_run = 3;
};

/// Mixes a base seed with a tag so that independent random draws (Haar
/// factors, factor noise) never share a stream. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t salt = 0);

/// Columns t_i - T + 1 .. t_i of the source, with t_i a 1-based column
/// position.
RawMatrix real_time_window(const DataSource& omega, Eigen::Index t_i, const WindowConfig& cfg);

/// The L Haar factors used for every window of one run over an N-row source.
std::vector<SquareComplexMatrix> run_unitaries(Eigen::Index n, int L, std::uint64_t seed);

struct WindowAnalysis {
    RingSpectrum ring;
    CovarianceSpectrum covariance;
};

/// Standardize, form singular value equivalents with the given unitaries,
/// multiply, standardize the product, then take the eigenvalues of the
/// product and of its sample covariance matrix.
WindowAnalysis analyze_window(const RawMatrix& x, const WindowConfig& cfg,
                              std::span<const SquareComplexMatrix> unitaries);
WindowAnalysis analyze_window(const RawMatrix& x, const WindowConfig& cfg, std::uint64_t seed);

/// Standard matrix product of one window; the shared first half of
/// analyze_window.
SquareComplexMatrix standard_product(const RawMatrix& x, const WindowConfig& cfg,
                                     std::span<const SquareComplexMatrix> unitaries);

enum class SourceKind { status_only, augmented };

struct IndicatorSeries {
    std::vector<TimeIndex> times;
    std::vector<double> msr_values;
    std::vector<double> vsr_values;
    double inner_radius = 0.0;
    double theoretical_msr = 0.0;
    int window_length = 0;
    Eigen::Index rows = 0;
    SourceKind source_kind = SourceKind::status_only;
    std::string factor_name;  // empty for status_only

    [[nodiscard]] std::string source_label() const;
};

/// MSR and VSR at every analyzable time of `values` (rows = variables).
IndicatorSeries run_series(const RealMatrix& values, std::span<const TimeIndex> times,
                           const WindowConfig& cfg, std::uint64_t seed);
IndicatorSeries run_series(const DataSource& omega, const WindowConfig& cfg, std::uint64_t seed);

struct SignalEvent {
    TimeIndex area_start = 0;
    TimeIndex area_end = 0;  // first sample back inside the ring
    TimeIndex onset = 0;
    TimeIndex inferred_duration = 0;
};

/// Maximal excursions of the MSR below the series' inner radius. An area
/// ends at the first sample of the run that re-enters the ring; the true
/// signal duration is then area_end - area_start + 1 - T.
std::vector<SignalEvent> detect_signal_areas(const IndicatorSeries& series,
                                             const DetectionConfig& det = {});

struct FactorExcursion {
    TimeIndex area_start = 0;
    TimeIndex area_end = 0;
    double min_msr = 0.0;
    std::size_t event_index = 0;  // status event containing the excursion
};

struct FactorVerdict {
    std::string factor;
    bool correlated = false;
    double msr_drop = 0.0;  // inner radius - min augmented MSR inside status areas
    double min_msr = 0.0;
    double inner_radius = 0.0;
    std::vector<FactorExcursion> excursions;
};

struct FactorCorrelation {
    IndicatorSeries series;
    FactorVerdict verdict;
    double noise_magnitude = 0.0;
};

/// Verdict of an augmented series against the status signal areas: the
/// factor is correlated iff its augmented MSR leaves the ring inside one of
/// the areas.
FactorVerdict judge_factor(const IndicatorSeries& augmented, std::span<const SignalEvent> events,
                           const DetectionConfig& det = {});

FactorCorrelation correlate_factor(const DataSource& status, const FactorSpec& spec,
                                   const WindowConfig& cfg, std::uint64_t seed,
                                   std::span<const SignalEvent> status_events,
                                   const DetectionConfig& det = {});

/// Convenience form that derives the status signal areas itself.
FactorCorrelation correlate_factor(const DataSource& status, const FactorSpec& spec,
                                   const WindowConfig& cfg, std::uint64_t seed,
                                   const DetectionConfig& det = {});

struct CorrelationReport {
    IndicatorSeries status;
    std::vector<SignalEvent> events;
    std::vector<FactorCorrelation> factors;
};

/// Status series, its signal areas, and one augmented analysis per factor.
CorrelationReport correlation_analysis(const DataSource& status, std::span<const FactorSpec> factors,
                                       const WindowConfig& cfg, std::uint64_t seed,
                                       const DetectionConfig& det = {});

}  // namespace rmtcorr
