#include "rmtcorr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Every
// index is written by exactly one worker.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1U, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t salt) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(base ^ h) + salt);
}

void DataSource::validate() const {
    if (static_cast<Eigen::Index>(variables.size()) != values.rows()) {
        throw Error("data source: variable label count does not match row count");
    }
    if (static_cast<Eigen::Index>(times.size()) != values.cols()) {
        throw Error("data source: time label count does not match column count");
    }
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (times[j] <= times[j - 1]) {
            std::ostringstream os;
            os << "data source: time labels must strictly increase (column " << j << ", time "
               << times[j] << ")";
            throw Error(os.str());
        }
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        for (Eigen::Index i = 0; i < values.rows(); ++i)
            if (!std::isfinite(values(i, j))) {
                std::ostringstream os;
                os << "data source: non-finite value for variable '" << variables[i] << "' at time "
                   << times[j];
                throw Error(os.str());
            }
}

void WindowConfig::validate() const {
    if (T < 2) throw Error("T: window length must be >= 2");
    if (L < 1) throw Error("L: product length must be >= 1");
}

RawMatrix real_time_window(const DataSource& omega, Eigen::Index t_i, const WindowConfig& cfg) {
    cfg.validate();
    if (t_i < cfg.T) {
        std::ostringstream os;
        os << "insufficient history: time position " << t_i << " precedes the first full window (T="
           << cfg.T << ")";
        throw Error(os.str());
    }
    if (t_i > omega.cols()) {
        std::ostringstream os;
        os << "time position " << t_i << " is past the end of the data source (" << omega.cols()
           << " columns)";
        throw Error(os.str());
    }
    const Eigen::Index first = t_i - cfg.T;
    RawMatrix out;
    out.values = omega.values.middleCols(first, cfg.T);
    out.row_labels = omega.variables;
    out.time_labels.assign(omega.times.begin() + first, omega.times.begin() + t_i);
    return out;
}

std::vector<SquareComplexMatrix> run_unitaries(Eigen::Index n, int L, std::uint64_t seed) {
    std::vector<SquareComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i)
        out.push_back(haar_unitary(n, derive_seed(seed, "unitary", static_cast<std::uint64_t>(n) * 64 + i)));
    return out;
}

SquareComplexMatrix standard_product(const RawMatrix& x, const WindowConfig& cfg,
                                     std::span<const SquareComplexMatrix> unitaries) {
    cfg.validate();
    if (static_cast<int>(unitaries.size()) != cfg.L) {
        std::ostringstream os;
        os << "analyze_window: need " << cfg.L << " unitaries, got " << unitaries.size();
        throw Error(os.str());
    }
    if (x.values.rows() > x.values.cols()) {
        std::ostringstream os;
        os << "analyze_window: window has more rows (" << x.values.rows() << ") than columns ("
           << x.values.cols() << "); the ring law needs N <= T";
        throw Error(os.str());
    }
    const StandardMatrix xs = standardize_rows(x);
    std::vector<SquareComplexMatrix> factors;
    factors.reserve(unitaries.size());
    // The L factors share the window's singular values and differ in their
    // Haar rotation.
    for (const auto& u : unitaries) factors.push_back(singular_value_equivalent(xs, u));
    return standardize_product(matrix_product(factors));
}

WindowAnalysis analyze_window(const RawMatrix& x, const WindowConfig& cfg,
                              std::span<const SquareComplexMatrix> unitaries) {
    const SquareComplexMatrix z = standard_product(x, cfg, unitaries);
    const auto ring_params = RingLawParams::for_shape(x.values.rows(), x.values.cols(), cfg.L);
    WindowAnalysis out{ring_spectrum(eigenvalues(z.values), ring_params),
                       CovarianceSpectrum{hermitian_eigenvalues(sample_covariance(z).values),
                                          MPLawParams(ring_params.c(), 1.0)}};
    return out;
}

WindowAnalysis analyze_window(const RawMatrix& x, const WindowConfig& cfg, std::uint64_t seed) {
    const auto us = run_unitaries(x.values.rows(), cfg.L, seed);
    return analyze_window(x, cfg, us);
}

std::string IndicatorSeries::source_label() const {
    return source_kind == SourceKind::status_only ? std::string("status") : factor_name;
}

IndicatorSeries run_series(const RealMatrix& values, std::span<const TimeIndex> times,
                           const WindowConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (static_cast<Eigen::Index>(times.size()) != values.cols()) {
        throw Error("run_series: time label count does not match column count");
    }
    if (values.cols() < cfg.T) {
        std::ostringstream os;
        os << "insufficient history: source has " << values.cols() << " sampling times, T=" << cfg.T;
        throw Error(os.str());
    }
    const Eigen::Index n = values.rows();
    const auto params = RingLawParams::for_shape(n, cfg.T, cfg.L);
    const auto unitaries = run_unitaries(n, cfg.L, seed);

    IndicatorSeries out;
    out.inner_radius = ring_radii(params).inner;
    out.theoretical_msr = theoretical_msr(params);
    out.window_length = cfg.T;
    out.rows = n;

    const std::size_t count = static_cast<std::size_t>(values.cols() - cfg.T + 1);
    out.times.resize(count);
    out.msr_values.resize(count);
    out.vsr_values.resize(count);

    parallel_for(count, [&](std::size_t w) {
        RawMatrix x;
        x.values = values.middleCols(static_cast<Eigen::Index>(w), cfg.T);
        const auto ev = eigenvalues(standard_product(x, cfg, unitaries).values);
        out.times[w] = times[w + cfg.T - 1];
        out.msr_values[w] = msr(ev);
        out.vsr_values[w] = vsr(ev);
    });
    return out;
}

IndicatorSeries run_series(const DataSource& omega, const WindowConfig& cfg, std::uint64_t seed) {
    omega.validate();
    return run_series(omega.values, omega.times, cfg, seed);
}

std::vector<SignalEvent> detect_signal_areas(const IndicatorSeries& series, const DetectionConfig& det) {
    if (det.open_run < 1 || det.close_run < 1) throw Error("detection: run lengths must be >= 1");
    const std::size_t n = series.msr_values.size();
    auto below = [&](std::size_t i) { return series.msr_values[i] < series.inner_radius; };
    // Length of the run of samples with below(i) == state starting at i.
    auto run_length = [&](std::size_t i, bool state) {
        std::size_t j = i;
        while (j < n && below(j) == state) ++j;
        return j - i;
    };

    std::vector<SignalEvent> events;
    std::size_t i = 0;
    while (i < n) {
        if (!below(i)) {
            ++i;
            continue;
        }
        const std::size_t len = run_length(i, true);
        if (len < static_cast<std::size_t>(det.open_run)) {
            i += len;
            continue;
        }
        SignalEvent ev;
        ev.area_start = series.times[i];
        ev.onset = ev.area_start;
        std::size_t j = i + len;
        bool closed = false;
        while (j < n) {
            const std::size_t inside = run_length(j, false);
            if (inside >= static_cast<std::size_t>(det.close_run)) {
                ev.area_end = series.times[j];
                closed = true;
                break;
            }
            j += inside;
            if (j >= n) break;
            j += run_length(j, true);
        }
        if (!closed) {
            ev.area_end = series.times.back();
            j = n;
        }
        ev.inferred_duration = std::max<TimeIndex>(0, ev.area_end - ev.area_start + 1 - series.window_length);
        events.push_back(ev);
        i = j;
    }
    return events;
}

FactorVerdict judge_factor(const IndicatorSeries& augmented, std::span<const SignalEvent> events,
                           const DetectionConfig& det) {
    FactorVerdict v;
    v.factor = augmented.factor_name;
    v.inner_radius = augmented.inner_radius;
    v.min_msr = std::numeric_limits<double>::quiet_NaN();
    v.msr_drop = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t i = 0; i < augmented.times.size(); ++i) {
        const TimeIndex t = augmented.times[i];
        for (const auto& ev : events) {
            if (t >= ev.area_start && t <= ev.area_end) {
                if (!(augmented.msr_values[i] >= v.min_msr)) v.min_msr = augmented.msr_values[i];
                break;
            }
        }
    }
    if (!std::isnan(v.min_msr)) v.msr_drop = v.inner_radius - v.min_msr;

    const auto own = detect_signal_areas(augmented, det);
    for (const auto& ex : own) {
        for (std::size_t e = 0; e < events.size(); ++e) {
            const TimeIndex s = std::max(ex.area_start, events[e].area_start);
            const TimeIndex f = std::min(ex.area_end, events[e].area_end);
            if (s > f) continue;
            FactorExcursion fx{s, f, std::numeric_limits<double>::infinity(), e};
            for (std::size_t i = 0; i < augmented.times.size(); ++i)
                if (augmented.times[i] >= s && augmented.times[i] <= f)
                    fx.min_msr = std::min(fx.min_msr, augmented.msr_values[i]);
            v.excursions.push_back(fx);
        }
    }
    v.correlated = !v.excursions.empty();
    return v;
}

FactorCorrelation correlate_factor(const DataSource& status, const FactorSpec& spec,
                                   const WindowConfig& cfg, std::uint64_t seed,
                                   std::span<const SignalEvent> status_events,
                                   const DetectionConfig& det) {
    status.validate();
    spec.validate(static_cast<std::size_t>(status.cols()));
    const FactorMatrix c = build_factor_matrix(spec, derive_seed(seed, "factor-noise:" + spec.name));
    const AugmentedFrame a = assemble_augmented(status.values, c);

    FactorCorrelation out;
    out.series = run_series(a.stacked, status.times, cfg, seed);
    out.series.source_kind = SourceKind::augmented;
    out.series.factor_name = spec.name;
    out.verdict = judge_factor(out.series, status_events, det);
    out.noise_magnitude = c.noise_magnitude;
    return out;
}

FactorCorrelation correlate_factor(const DataSource& status, const FactorSpec& spec,
                                   const WindowConfig& cfg, std::uint64_t seed,
                                   const DetectionConfig& det) {
    const auto series = run_series(status, cfg, seed);
    const auto events = detect_signal_areas(series, det);
    return correlate_factor(status, spec, cfg, seed, events, det);
}

CorrelationReport correlation_analysis(const DataSource& status, std::span<const FactorSpec> factors,
                                       const WindowConfig& cfg, std::uint64_t seed,
                                       const DetectionConfig& det) {
    CorrelationReport out;
    out.status = run_series(status, cfg, seed);
    out.events = detect_signal_areas(out.status, det);
    out.factors.reserve(factors.size());
    for (const auto& f : factors) out.factors.push_back(correlate_factor(status, f, cfg, seed, out.events, det));
    return out;
}

}  // namespace rmtcorr
