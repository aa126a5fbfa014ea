#include "rmtcorr/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

constexpr double kSpilloverFraction = 0.1;
constexpr double kSpilloverDecay = 3.0;  // rows

// "bus117" -> 116 (0-based row), -1 when the name carries no bus number.
Eigen::Index bus_row(const std::string& name) {
    const auto first = std::find_if(name.begin(), name.end(), [](unsigned char c) { return std::isdigit(c); });
    if (first == name.end()) return -1;
    const auto last = std::find_if(first, name.end(), [](unsigned char c) { return !std::isdigit(c); });
    return std::stol(std::string(first, last)) - 1;
}

}  // namespace

std::string shape_kind_name(ShapeKind k) {
    switch (k) {
        case ShapeKind::constant: return "constant";
        case ShapeKind::step: return "step";
        case ShapeKind::pulse: return "pulse";
        case ShapeKind::staircase: return "staircase";
    }
    return "unknown";
}

void SignalShape::validate(TimeIndex horizon) const {
    if (segments.empty()) throw Error("signal shape: no segments");
    TimeIndex expect = 1;
    for (const auto& s : segments) {
        if (s.start != expect || s.end < s.start) {
            std::ostringstream os;
            os << "signal shape: segments do not tile [1, " << horizon << "] (segment " << s.start
               << "-" << s.end << ", expected start " << expect << ")";
            throw Error(os.str());
        }
        if (!std::isfinite(s.level)) throw Error("signal shape: non-finite level");
        expect = s.end + 1;
    }
    if (expect != horizon + 1) {
        std::ostringstream os;
        os << "signal shape: segments end at " << expect - 1 << ", horizon is " << horizon;
        throw Error(os.str());
    }
}

double SignalShape::level_at(TimeIndex t) const {
    for (const auto& s : segments)
        if (t >= s.start && t <= s.end) return s.level;
    throw Error("signal shape: time outside all segments");
}

void ScenarioSpec::validate() const {
    if (n_status < 1) throw Error("scenario: n_status must be >= 1");
    if (horizon < 2) throw Error("scenario: horizon must be >= 2");
    if (factor_sample_stride < 1 || horizon % factor_sample_stride != 0)
        throw Error("scenario: factor_sample_stride must divide the horizon");
    if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) throw Error("scenario: noise_level must be >= 0");
    for (const auto& [name, shape] : factors) {
        try {
            shape.validate(horizon);
        } catch (const Error& e) {
            throw Error("factor '" + name + "': " + e.what());
        }
    }
}

double ScenarioSpec::base_load(const std::string& factor) const {
    for (const auto& [name, shape] : factors)
        if (name == factor) return shape.level_at(1);
    throw Error("scenario: unknown factor '" + factor + "'");
}

SurrogateModel build_surrogate(Eigen::Index n_status, const std::vector<std::string>& factor_names,
                               std::uint64_t sensitivity_seed) {
    if (n_status < 1) throw Error("build_surrogate: n_status must be >= 1");
    std::mt19937_64 rng(sensitivity_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SurrogateModel m;
    m.factor_names = factor_names;
    m.baseline.resize(n_status);
    for (Eigen::Index i = 0; i < n_status; ++i) m.baseline(i) = 0.98 + 0.04 * unit(rng);

    const Eigen::Index block = std::min(kResponseBlock, n_status);
    m.sensitivity = RealMatrix::Zero(n_status, static_cast<Eigen::Index>(factor_names.size()));
    for (std::size_t f = 0; f < factor_names.size(); ++f) {
        Eigen::Index center = bus_row(factor_names[f]);
        if (center < 0 || center >= n_status)
            center = static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n_status));
        const Eigen::Index lo = std::clamp<Eigen::Index>(center - block / 2, 0, n_status - block);
        const Eigen::Index hi = lo + block;  // exclusive
        for (Eigen::Index i = 0; i < n_status; ++i) {
            double s;
            if (i >= lo && i < hi) {
                s = 0.8 + 0.4 * unit(rng);
            } else {
                const double dist = static_cast<double>(i < lo ? lo - i : i - hi + 1);
                s = kSpilloverFraction * std::exp(-dist / kSpilloverDecay);
            }
            // Heavier load depresses voltage.
            m.sensitivity(i, static_cast<Eigen::Index>(f)) = -kStrongSensitivity * s;
        }
    }
    return m;
}

ScenarioData generate(const ScenarioSpec& spec, const SurrogateModel& model) {
    spec.validate();
    if (model.baseline.size() != spec.n_status)
        throw Error("generate: surrogate row count does not match n_status");
    if (model.factor_names.size() != spec.factors.size())
        throw Error("generate: surrogate factor count does not match the scenario");

    const Eigen::Index n = spec.n_status;
    const Eigen::Index t = spec.horizon;
    const std::size_t m = spec.factors.size();

    ScenarioData out;
    out.true_loads.assign(m, std::vector<double>(static_cast<std::size_t>(t)));
    RealMatrix deviation(static_cast<Eigen::Index>(m), t);
    for (std::size_t f = 0; f < m; ++f) {
        if (spec.factors[f].first != model.factor_names[f])
            throw Error("generate: surrogate factor order does not match the scenario");
        const auto& shape = spec.factors[f].second;
        const double base = shape.level_at(1);
        for (Eigen::Index j = 0; j < t; ++j) {
            const double load = shape.level_at(j + 1);
            out.true_loads[f][static_cast<std::size_t>(j)] = load;
            deviation(static_cast<Eigen::Index>(f), j) = load - base;
        }
    }

    std::mt19937_64 rng(spec.noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    RealMatrix b = model.baseline.replicate(1, t);
    if (m > 0) b += model.sensitivity * deviation;
    for (Eigen::Index j = 0; j < t; ++j)
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) += spec.noise_level * normal(rng);

    out.status.values = std::move(b);
    out.status.times.resize(static_cast<std::size_t>(t));
    for (Eigen::Index j = 0; j < t; ++j) out.status.times[static_cast<std::size_t>(j)] = j + 1;
    out.status.variables.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.status.variables[static_cast<std::size_t>(i)] = "v" + std::to_string(i + 1);

    // Loads are measured once per stride with relative noise and held.
    for (std::size_t f = 0; f < m; ++f) {
        FactorSpec fs;
        fs.name = spec.factors[f].first;
        fs.k = default_replication(n);
        fs.values.resize(static_cast<std::size_t>(t));
        for (Eigen::Index j0 = 0; j0 < t; j0 += spec.factor_sample_stride) {
            const double level = out.true_loads[f][static_cast<std::size_t>(j0)];
            const double sample = level * (1.0 + spec.noise_level * normal(rng));
            for (Eigen::Index j = j0; j < j0 + spec.factor_sample_stride; ++j)
                fs.values[static_cast<std::size_t>(j)] = sample;
        }
        out.factors.push_back(std::move(fs));
    }
    return out;
}

ScenarioData generate(const ScenarioSpec& spec) {
    std::vector<std::string> names;
    for (const auto& f : spec.factors) names.push_back(f.first);
    return generate(spec, build_surrogate(spec.n_status, names, spec.sensitivity_seed));
}

namespace {

SignalShape constant_shape(double level, TimeIndex horizon) {
    return {ShapeKind::constant, {{1, horizon, level}}};
}

SignalShape case1_bus117() {
    return {ShapeKind::step, {{1, 500, 20.0}, {501, 1000, 120.0}}};
}

SignalShape case2_bus117() {
    return {ShapeKind::pulse,
            {{1, 300, 60.0}, {301, 350, 120.0}, {351, 650, 60.0}, {651, 700, 20.0}, {701, 1000, 60.0}}};
}

SignalShape case3_bus54() {
    return {ShapeKind::staircase,
            {{1, 300, 113.0},
             {301, 350, 135.6},
             {351, 400, 158.2},
             {401, 450, 180.8},
             {451, 500, 203.4},
             {501, 550, 226.0},
             {551, 600, 248.6},
             {601, 650, 271.2},
             {651, 700, 293.8},
             {701, 1000, 316.4}}};
}

}  // namespace

ScenarioSpec preset(int case_id) {
    ScenarioSpec s;
    s.case_id = case_id;
    switch (case_id) {
        case 1:
            s.factors = {{"bus117", case1_bus117()}, {"bus54", constant_shape(113.0, s.horizon)}};
            break;
        case 2:
            s.factors = {{"bus117", case2_bus117()}, {"bus54", constant_shape(113.0, s.horizon)}};
            break;
        case 3:
            s.factors = {{"bus117", constant_shape(60.0, s.horizon)}, {"bus54", case3_bus54()}};
            break;
        case 4:
            s.factors = {{"bus117", case2_bus117()}, {"bus54", case3_bus54()}};
            break;
        default: {
            std::ostringstream os;
            os << "unknown scenario case " << case_id << " (expected 1-4)";
            throw Error(os.str());
        }
    }
    return s;
}

}  // namespace rmtcorr
