#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmtcorr/augmented.hpp"
#include "rmtcorr/indicators.hpp"
#include "rmtcorr/io.hpp"
#include "rmtcorr/pipeline.hpp"
#include "rmtcorr/rmt_core.hpp"
#include "rmtcorr/scenario.hpp"

namespace py = pybind11;
using namespace rmtcorr;

namespace {

DataSource make_source(const RealMatrix& values, std::vector<TimeIndex> times, std::vector<std::string> names) {
    DataSource ds;
    ds.values = values;
    if (times.empty())
        for (Eigen::Index j = 0; j < values.cols(); ++j) times.push_back(j + 1);
    if (names.empty())
        for (Eigen::Index i = 0; i < values.rows(); ++i) names.push_back("v" + std::to_string(i + 1));
    ds.times = std::move(times);
    ds.variables = std::move(names);
    ds.validate();
    return ds;
}

}  // namespace

PYBIND11_MODULE(_rmtcorr, m) {
    m.doc() = "Random-matrix spectral indicators for correlation analysis of grid measurements";
    py::register_exception<Error>(m, "RmtError", PyExc_ValueError);

    py::class_<RingLawParams>(m, "RingLawParams")
        .def(py::init<double, int>(), py::arg("c"), py::arg("L") = 1)
        .def_property_readonly("c", &RingLawParams::c)
        .def_property_readonly("L", &RingLawParams::L);
    py::class_<MPLawParams>(m, "MPLawParams")
        .def(py::init<double, double>(), py::arg("c"), py::arg("d") = 1.0)
        .def_property_readonly("lower", &MPLawParams::lower)
        .def_property_readonly("upper", &MPLawParams::upper);
    py::class_<RingRadii>(m, "RingRadii")
        .def_readonly("inner", &RingRadii::inner)
        .def_readonly("outer", &RingRadii::outer);

    m.def("ring_radii", [](double c, int L) { return ring_radii({c, L}); }, py::arg("c"), py::arg("L") = 1);
    m.def("theoretical_msr", [](double c, int L) { return theoretical_msr({c, L}); }, py::arg("c"),
          py::arg("L") = 1);
    m.def("ring_law_pdf", [](double r, double c, int L) { return ring_law_pdf(r, {c, L}); }, py::arg("r"),
          py::arg("c"), py::arg("L") = 1);
    m.def("mp_law_pdf", [](double x, double c, double d) { return mp_law_pdf(x, {c, d}); }, py::arg("x"),
          py::arg("c"), py::arg("d") = 1.0);

    m.def(
        "standardize_rows",
        [](const RealMatrix& x) {
            RawMatrix raw;
            raw.values = x;
            auto s = standardize_rows(raw);
            return py::make_tuple(s.values, s.constant_rows);
        },
        py::arg("x"), "Row-standardized copy of x and the indices of constant rows.");
    m.def("haar_unitary", [](Eigen::Index n, std::uint64_t seed) { return haar_unitary(n, seed).values; },
          py::arg("n"), py::arg("seed"));
    m.def(
        "singular_value_equivalent",
        [](const RealMatrix& x, const ComplexMatrix& u) {
            StandardMatrix s;
            s.values = x;
            return singular_value_equivalent(s, {u, SquareKind::haar_unitary}).values;
        },
        py::arg("x_standard"), py::arg("u"));
    m.def(
        "eigenvalues", [](const ComplexMatrix& a) { return eigenvalues(a); }, py::arg("a"));
    m.def(
        "msr", [](const std::vector<Complex>& e) { return msr(e); }, py::arg("eigenvalues"));
    m.def(
        "vsr", [](const std::vector<Complex>& e) { return vsr(e); }, py::arg("eigenvalues"));

    py::class_<RingSpectrum>(m, "RingSpectrum")
        .def_readonly("eigenvalues", &RingSpectrum::eigenvalues)
        .def_readonly("msr", &RingSpectrum::msr)
        .def_readonly("vsr", &RingSpectrum::vsr);
    py::class_<CovarianceSpectrum>(m, "CovarianceSpectrum")
        .def_readonly("eigenvalues", &CovarianceSpectrum::eigenvalues);
    py::class_<WindowAnalysis>(m, "WindowAnalysis")
        .def_readonly("ring", &WindowAnalysis::ring)
        .def_readonly("covariance", &WindowAnalysis::covariance);
    m.def(
        "analyze_window",
        [](const RealMatrix& x, int L, std::uint64_t seed) {
            RawMatrix raw;
            raw.values = x;
            return analyze_window(raw, WindowConfig{static_cast<int>(x.cols()), L}, seed);
        },
        py::arg("x"), py::arg("L") = 1, py::arg("seed") = 1,
        "Ring and covariance spectra of one N x T window.");

    py::class_<KdeCurve>(m, "KdeCurve")
        .def_readonly("grid", &KdeCurve::grid)
        .def_readonly("density", &KdeCurve::density)
        .def_readonly("bandwidth", &KdeCurve::bandwidth);
    m.def(
        "kde",
        [](const std::vector<double>& e, std::optional<std::vector<double>> grid, std::optional<double> h,
           const std::string& kernel) { return kde(e, std::move(grid), h, parse_kernel(kernel)); },
        py::arg("eigenvalues"), py::arg("grid") = py::none(), py::arg("bandwidth") = py::none(),
        py::arg("kernel") = "gaussian");

    m.def("noise_magnitude", &noise_magnitude, py::arg("d"), py::arg("e"), py::arg("rho"));
    m.def("snr", &snr, py::arg("d"), py::arg("e"), py::arg("m_e"));

    py::class_<IndicatorSeries>(m, "IndicatorSeries")
        .def_readonly("times", &IndicatorSeries::times)
        .def_readonly("msr", &IndicatorSeries::msr_values)
        .def_readonly("vsr", &IndicatorSeries::vsr_values)
        .def_readonly("inner_radius", &IndicatorSeries::inner_radius)
        .def_readonly("theoretical_msr", &IndicatorSeries::theoretical_msr)
        .def_readonly("factor", &IndicatorSeries::factor_name);
    m.def(
        "run_series",
        [](const RealMatrix& values, std::vector<TimeIndex> times, int T, int L, std::uint64_t seed) {
            return run_series(make_source(values, std::move(times), {}), WindowConfig{T, L}, seed);
        },
        py::arg("values"), py::arg("times") = std::vector<TimeIndex>{}, py::arg("T") = 240, py::arg("L") = 1,
        py::arg("seed") = 1, "MSR/VSR at every time with a full window of history.");

    py::class_<SignalEvent>(m, "SignalEvent")
        .def_readonly("area_start", &SignalEvent::area_start)
        .def_readonly("area_end", &SignalEvent::area_end)
        .def_readonly("onset", &SignalEvent::onset)
        .def_readonly("inferred_duration", &SignalEvent::inferred_duration)
        .def("__repr__", [](const SignalEvent& e) {
            return "SignalEvent(" + std::to_string(e.area_start) + ", " + std::to_string(e.area_end) +
                   ", duration=" + std::to_string(e.inferred_duration) + ")";
        });
    m.def(
        "detect_signal_areas",
        [](const IndicatorSeries& s, int open_run, int close_run) {
            return detect_signal_areas(s, DetectionConfig{open_run, close_run});
        },
        py::arg("series"), py::arg("open_run") = 3, py::arg("close_run") = 3);

    py::class_<FactorVerdict>(m, "FactorVerdict")
        .def_readonly("factor", &FactorVerdict::factor)
        .def_readonly("correlated", &FactorVerdict::correlated)
        .def_readonly("msr_drop", &FactorVerdict::msr_drop)
        .def_readonly("min_msr", &FactorVerdict::min_msr);
    py::class_<FactorCorrelation>(m, "FactorCorrelation")
        .def_readonly("series", &FactorCorrelation::series)
        .def_readonly("verdict", &FactorCorrelation::verdict)
        .def_readonly("noise_magnitude", &FactorCorrelation::noise_magnitude);
    py::class_<CorrelationReport>(m, "CorrelationReport")
        .def_readonly("status", &CorrelationReport::status)
        .def_readonly("events", &CorrelationReport::events)
        .def_readonly("factors", &CorrelationReport::factors);
    m.def(
        "correlation_analysis",
        [](const RealMatrix& status, const std::map<std::string, std::vector<double>>& factors, int T, int L,
           int k, double rho, std::uint64_t seed) {
            const auto ds = make_source(status, {}, {});
            std::vector<FactorSpec> specs;
            for (const auto& [name, values] : factors)
                specs.push_back({name, values, k > 0 ? k : default_replication(status.rows()), rho});
            py::gil_scoped_release release;
            return correlation_analysis(ds, specs, WindowConfig{T, L}, seed);
        },
        py::arg("status"), py::arg("factors"), py::arg("T") = 240, py::arg("L") = 1, py::arg("k") = 0,
        py::arg("rho") = 500.0, py::arg("seed") = 1);

    m.def(
        "simulate",
        [](int case_id, double noise_level) {
            auto spec = preset(case_id);
            spec.noise_level = noise_level;
            const auto data = generate(spec);
            py::dict factors;
            for (const auto& f : data.factors) factors[py::str(f.name)] = f.values;
            return py::make_tuple(data.status.values, factors);
        },
        py::arg("case"), py::arg("noise_level") = 1e-4,
        "Status matrix (118 x 1000) and measured factor loads for a preset case.");
}
