#pragma once

// File formats. Data sources are CSV with a header row; the first column is
// the sampling-time index and each further column one variable, so a file
// row is one sampling time. Columns whose header starts with "factor:" hold
// factor (load) data rather than status data. Empty cells mean "not sampled
// at this time" and take the most recent sample (zero-order hold).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmtcorr/pipeline.hpp"
#include "rmtcorr/scenario.hpp"

namespace rmtcorr {

inline constexpr std::string_view kFactorPrefix = "factor:";

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

DataSource parse_csv(std::istream& in, const std::string& source_name = "<stream>");
DataSource ingest_csv(const std::filesystem::path& path);

void write_csv(std::ostream& out, const DataSource& ds);
void write_csv(const std::filesystem::path& path, const DataSource& ds);

/// Status columns plus "factor:<name>" columns for every factor.
DataSource scenario_source(const ScenarioData& data);

struct SplitSource {
    DataSource status;
    std::vector<FactorSpec> factors;
};

/// Separates factor columns (the "factor:" prefix, or a bare name listed in
/// `selected`) from status columns. When `selected` is non-empty only those
/// factors are returned, though every factor column is kept out of the
/// status matrix. k <= 0 picks floor(n / 2).
SplitSource split_factors(const DataSource& ds, const std::vector<std::string>& selected, int k,
                          double rho);

struct CurveSet {
    const IndicatorSeries* status = nullptr;
    std::vector<const IndicatorSeries*> factors;
};

void write_msr_curve(const std::filesystem::path& path, const CurveSet& curves);
void write_events(const std::filesystem::path& path, const std::vector<SignalEvent>& events);
void write_verdicts(const std::filesystem::path& path, const std::vector<FactorVerdict>& verdicts);

struct ScatterEntry {
    std::string source;
    const RingSpectrum* spectrum;
};
void write_ring_scatter(const std::filesystem::path& path, const std::vector<ScatterEntry>& entries);

struct KdeEntry {
    std::string source;
    EsdComparison curve;
};
void write_kde_curve(const std::filesystem::path& path, const std::vector<KdeEntry>& entries);

}  // namespace rmtcorr
