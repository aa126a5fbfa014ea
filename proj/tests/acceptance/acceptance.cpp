// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rmtcorr/augmented.hpp"
#include "rmtcorr/indicators.hpp"
#include "rmtcorr/pipeline.hpp"
#include "rmtcorr/rmt_core.hpp"
#include "rmtcorr/scenario.hpp"

using namespace rmtcorr;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool near(TimeIndex got, TimeIndex want, TimeIndex tol) { return std::abs(got - want) <= tol; }

struct CaseRun {
    CorrelationReport report;
    const FactorCorrelation& factor(const std::string& name) const {
        for (const auto& f : report.factors)
            if (f.verdict.factor == name) return f;
        throw Error("missing factor " + name);
    }
    double seconds = 0.0;
};

CaseRun run_case(int id) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto data = generate(preset(id));
    CaseRun r{correlation_analysis(data.status, data.factors, WindowConfig{}, 1)};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string areas(const std::vector<SignalEvent>& ev) {
    std::string s;
    for (const auto& e : ev) s += fmt("[%lld,%lld] d=%lld ", (long long)e.area_start, (long long)e.area_end,
                                      (long long)e.inferred_duration);
    return s.empty() ? "none" : s;
}

std::string excursions(const FactorVerdict& v) {
    std::string s;
    for (const auto& x : v.excursions) s += fmt("[%lld,%lld]", (long long)x.area_start, (long long)x.area_end);
    return s.empty() ? "none" : s;
}

double min_inside(const IndicatorSeries& s, const SignalEvent& ev) {
    double m = INFINITY;
    for (std::size_t i = 0; i < s.times.size(); ++i)
        if (s.times[i] >= ev.area_start && s.times[i] < ev.area_end) m = std::min(m, s.msr_values[i]);
    return m;
}

RawMatrix gaussian_window(Eigen::Index n, Eigen::Index t, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    RawMatrix x;
    x.values.resize(n, t);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < t; ++j) x.values(i, j) = nd(rng);
    return x;
}

}  // namespace

int main() {
    // 1. inner radii to four decimals
    {
        const double r1 = ring_radii({118.0 / 240.0, 1}).inner;
        const double r2 = ring_radii({177.0 / 240.0, 1}).inner;
        report(1, std::lround(r1 * 1e4) == 7130 && std::lround(r2 * 1e4) == 5123,
               fmt("inner radii %.4f (want 0.7130), %.4f (want 0.5123)", r1, r2));
    }

    // 2 and 3. white-noise MSR and Ring Law support
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(20160101);
        const double c = 118.0 / 240.0;
        const double inner = ring_radii({c, 1}).inner;
        double sum = 0.0;
        std::size_t inside = 0, total = 0;
        for (int w = 0; w < 50; ++w) {
            const auto a = analyze_window(gaussian_window(118, 240, rng), WindowConfig{240, 1}, 1000 + w);
            sum += a.ring.msr;
            for (const auto& l : a.ring.eigenvalues) {
                const double m = std::abs(l);
                inside += (m >= inner - 0.05 && m <= 1.05);
                ++total;
            }
        }
        const double mean = sum / 50.0;
        const double expect = theoretical_msr({c, 1});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(2, std::abs(mean - 0.8645) <= 0.02 && secs < 30.0,
               fmt("mean MSR %.4f over 50 windows, analytic %.4f, tolerance 0.02, %.1f s", mean, expect, secs));
        const double frac = static_cast<double>(inside) / static_cast<double>(total);
        report(3, frac >= 0.95, fmt("%.4f of moduli in [%.4f, 1.05], need >= 0.95", frac, inner - 0.05));
    }

    // 4. M-P fit of the covariance spectrum
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(177240);
        const auto a = analyze_window(gaussian_window(177, 240, rng), WindowConfig{240, 1}, 4);
        const auto& p = a.covariance.params;
        std::vector<double> grid;
        const double lo = p.lower() + 0.1, hi = p.upper() - 0.1;
        for (int i = 0; i <= 400; ++i) grid.push_back(lo + (hi - lo) * i / 400.0);
        const auto curve = kde(a.covariance.eigenvalues, grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup, std::abs(curve.density[i] - mp_law_pdf(grid[i], p)));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report(4, sup < 0.15 && secs < 10.0,
               fmt("sup |KDE - M-P| = %.4f on [%.3f, %.3f] (h = %.4f), need < 0.15, %.2f s", sup, lo, hi,
                   curve.bandwidth, secs));
        // Distance between the exact density and its own Gaussian smoothing at the same h: the floor any
        // finite-sample estimate with this bandwidth inherits.
        double floor = 0.0;
        const int panels = 20000;
        const double a0 = p.lower(), b0 = p.upper(), step = (b0 - a0) / panels;
        for (double g : grid) {
            double conv = 0.0;
            for (int i = 0; i <= panels; ++i) {
                const double x = a0 + i * step;
                const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
                conv += w * mp_law_pdf(x, p) * std::exp(-0.5 * std::pow((g - x) / curve.bandwidth, 2));
            }
            conv *= step / (curve.bandwidth * std::sqrt(2.0 * M_PI));
            floor = std::max(floor, std::abs(conv - mp_law_pdf(g, p)));
        }
        std::printf("       note: smoothing bias of the exact M-P density at h = %.4f is %.4f on the same range\n",
                    curve.bandwidth, floor);
    }

    // 5. case 1
    {
        const auto r = run_case(1);
        const auto& ev = r.report.events;
        bool ok = ev.size() == 1;
        double dip = NAN;
        if (ok) {
            ok = near(ev[0].area_start, 501, 2) && near(ev[0].area_end, 740, 5) && ev[0].inferred_duration >= 0 &&
                 ev[0].inferred_duration <= 2;
            dip = min_inside(r.factor("bus117").series, ev[0]);
            ok = ok && dip < 0.5123;
        }
        ok = ok && r.factor("bus117").verdict.correlated && !r.factor("bus54").verdict.correlated;
        ok = ok && r.seconds < 300.0;
        report(5, ok,
               fmt("events %s; bus117 correlated=%d (min augmented MSR %.4f), bus54 correlated=%d; %.0f s",
                   areas(ev).c_str(), r.factor("bus117").verdict.correlated, dip,
                   r.factor("bus54").verdict.correlated, r.seconds));
    }

    // 6 to 8. cases 2, 3 and their superposition
    const auto c2 = run_case(2);
    {
        const auto& ev = c2.report.events;
        bool ok = ev.size() == 2;
        if (ok)
            ok = near(ev[0].area_start, 301, 5) && near(ev[0].area_end, 590, 5) && near(ev[1].area_start, 651, 5) &&
                 near(ev[1].area_end, 940, 5) && near(ev[0].inferred_duration, 50, 2) &&
                 near(ev[1].inferred_duration, 50, 2);
        const auto& v117 = c2.factor("bus117").verdict;
        std::vector<bool> hit(ev.size(), false);
        for (const auto& x : v117.excursions) hit[x.event_index] = true;
        const bool both = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
        ok = ok && v117.correlated && both && !c2.factor("bus54").verdict.correlated;
        report(6, ok,
               fmt("events %s; bus117 correlated=%d in both=%d, bus54 correlated=%d", areas(ev).c_str(),
                   v117.correlated, both, c2.factor("bus54").verdict.correlated));
    }
    const auto c3 = run_case(3);
    {
        const auto& ev = c3.report.events;
        bool ok = ev.size() == 1;
        if (ok)
            ok = near(ev[0].area_start, 301, 5) && near(ev[0].area_end, 940, 5) &&
                 near(ev[0].inferred_duration, 400, 5);
        ok = ok && c3.factor("bus54").verdict.correlated && !c3.factor("bus117").verdict.correlated;
        report(7, ok,
               fmt("events %s; bus54 correlated=%d, bus117 correlated=%d", areas(ev).c_str(),
                   c3.factor("bus54").verdict.correlated, c3.factor("bus117").verdict.correlated));
    }
    {
        const auto c4 = run_case(4);
        // Each factor's verdict in case 4 must equal its verdict in the single-factor case where it is active.
        const bool v117 = c4.factor("bus117").verdict.correlated == c2.factor("bus117").verdict.correlated;
        const bool v54 = c4.factor("bus54").verdict.correlated == c3.factor("bus54").verdict.correlated;
        // The case 4 signal areas are the superposition (interval hull of overlapping areas) of cases 2 and 3.
        std::vector<std::pair<TimeIndex, TimeIndex>> merged;
        std::vector<std::pair<TimeIndex, TimeIndex>> all;
        for (const auto& e : c2.report.events) all.emplace_back(e.area_start, e.area_end);
        for (const auto& e : c3.report.events) all.emplace_back(e.area_start, e.area_end);
        std::sort(all.begin(), all.end());
        for (const auto& iv : all) {
            if (!merged.empty() && iv.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, iv.second);
            else
                merged.push_back(iv);
        }
        const auto& ev = c4.report.events;
        bool areas_ok = ev.size() == merged.size();
        for (std::size_t i = 0; areas_ok && i < ev.size(); ++i)
            areas_ok = near(ev[i].area_start, merged[i].first, 5) && near(ev[i].area_end, merged[i].second, 5);
        report(8, v117 && v54 && areas_ok,
               fmt("case 4 events %s vs superposed [%lld,%lld]; bus117 %d/%d (case 4/case 2), bus54 %d/%d "
                   "(case 4/case 3)",
                   areas(ev).c_str(), (long long)merged.front().first, (long long)merged.front().second,
                   c4.factor("bus117").verdict.correlated, c2.factor("bus117").verdict.correlated,
                   c4.factor("bus54").verdict.correlated, c3.factor("bus54").verdict.correlated));
        std::printf("       note: factor excursions bus117 case 4 %s vs case 2 %s; bus54 case 4 %s vs case 3 %s\n",
                    excursions(c4.factor("bus117").verdict).c_str(), excursions(c2.factor("bus117").verdict).c_str(),
                    excursions(c4.factor("bus54").verdict).c_str(), excursions(c3.factor("bus54").verdict).c_str());
    }

    // 9. SNR round trip
    {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> dim(1, 60);
        std::uniform_real_distribution<double> log_rho(-2.0, 5.0), scale(0.01, 100.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int r = dim(rng), c = dim(rng);
            const RealMatrix d = scale(rng) * standard_normal_matrix(r, c, rng());
            const RealMatrix e = standard_normal_matrix(r, c, rng());
            const double rho = std::pow(10.0, log_rho(rng));
            worst = std::max(worst, std::abs(snr(d, e, noise_magnitude(d, e, rho)) - rho));
        }
        report(9, worst < 1e-9, fmt("max |snr - rho| over 100 triples = %.3e, need < 1e-9", worst));
    }

    // 10. SVE Gram invariant and Haar unitarity
    {
        std::mt19937_64 rng(10);
        std::uniform_int_distribution<int> rows(2, 118);
        double gram = 0.0, unit = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = rows(rng);
            std::uniform_int_distribution<int> cols(n, 240);
            const auto x = standardize_rows(gaussian_window(n, cols(rng), rng));
            const auto u = haar_unitary(n, rng());
            const auto xu = singular_value_equivalent(x, u);
            const RealMatrix g0 = x.values * x.values.transpose();
            const ComplexMatrix g1 = xu.values * xu.values.adjoint();
            gram = std::max(gram, (g1 - g0.cast<Complex>()).norm() / g0.norm());
            unit = std::max(unit, (u.values * u.values.adjoint() - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
        }
        report(10, gram < 1e-8 && unit < 1e-10,
               fmt("max relative Gram error %.3e (need < 1e-8), max unitarity error %.3e (need < 1e-10)", gram, unit));
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
