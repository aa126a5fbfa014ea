#include <doctest.h>

#include <cmath>

#include "rmtcorr/error.hpp"
#include "rmtcorr/scenario.hpp"

using namespace rmtcorr;

namespace {

const SignalShape& shape_of(const ScenarioSpec& s, const std::string& name) {
    for (const auto& [n, shape] : s.factors)
        if (n == name) return shape;
    throw Error("missing factor " + name);
}

}  // namespace

TEST_CASE("preset load schedules") {
    SUBCASE("case 1: bus 117 steps from 20 to 120 MW at t = 501") {
        const auto s = preset(1);
        const auto& b117 = shape_of(s, "bus117");
        CHECK(b117.level_at(500) == 20.0);
        CHECK(b117.level_at(501) == 120.0);
        CHECK(b117.level_at(1000) == 120.0);
        CHECK(shape_of(s, "bus54").level_at(700) == 113.0);
    }
    SUBCASE("case 2: two 50-sample pulses") {
        const auto s = preset(2);
        const auto& b = shape_of(s, "bus117");
        CHECK(b.level_at(300) == 60.0);
        CHECK(b.level_at(301) == 120.0);
        CHECK(b.level_at(350) == 120.0);
        CHECK(b.level_at(351) == 60.0);
        CHECK(b.level_at(651) == 20.0);
        CHECK(b.level_at(700) == 20.0);
        CHECK(b.level_at(701) == 60.0);
    }
    SUBCASE("case 3: bus 54 rises by 22.6 MW every 50 samples from t = 301") {
        const auto s = preset(3);
        const auto& b = shape_of(s, "bus54");
        CHECK(b.level_at(300) == 113.0);
        for (int step = 0; step < 9; ++step)
            CHECK(b.level_at(301 + 50 * step) == doctest::Approx(113.0 + 22.6 * (step + 1)));
        CHECK(b.level_at(1000) == doctest::Approx(316.4));
        CHECK(shape_of(s, "bus117").level_at(500) == 60.0);
    }
    SUBCASE("case 4 combines case 2 on bus 117 and case 3 on bus 54") {
        const auto s = preset(4), s2 = preset(2), s3 = preset(3);
        for (TimeIndex t = 1; t <= 1000; t += 7) {
            CHECK(shape_of(s, "bus117").level_at(t) == shape_of(s2, "bus117").level_at(t));
            CHECK(shape_of(s, "bus54").level_at(t) == shape_of(s3, "bus54").level_at(t));
        }
    }
    SUBCASE("all presets validate and use the same horizon and row count") {
        for (int c = 1; c <= 4; ++c) {
            const auto s = preset(c);
            CHECK_NOTHROW(s.validate());
            CHECK(s.n_status == 118);
            CHECK(s.horizon == 1000);
        }
        CHECK_THROWS_AS(preset(5), Error);
    }
}

TEST_CASE("SignalShape validation") {
    CHECK_THROWS_AS((SignalShape{ShapeKind::step, {{1, 10, 1.0}, {12, 20, 2.0}}}.validate(20)), Error);
    CHECK_THROWS_AS((SignalShape{ShapeKind::step, {{1, 10, 1.0}}}.validate(20)), Error);
    CHECK_THROWS_AS((SignalShape{ShapeKind::constant, {}}.validate(20)), Error);
    CHECK_NOTHROW((SignalShape{ShapeKind::step, {{1, 10, 1.0}, {11, 20, 2.0}}}.validate(20)));
    CHECK(shape_kind_name(ShapeKind::staircase) == "staircase");
}

TEST_CASE("build_surrogate") {
    const auto m = build_surrogate(118, {"bus117", "bus54"}, 118);
    CHECK(m.sensitivity.rows() == 118);
    CHECK(m.sensitivity.cols() == 2);
    CHECK(m.baseline.minCoeff() >= 0.98);
    CHECK(m.baseline.maxCoeff() <= 1.02);
    CHECK(m.sensitivity.maxCoeff() < 0.0);

    // bus 117 sits at the bottom edge: its block is clamped to the last 20 rows
    const auto strong = [&](Eigen::Index row, Eigen::Index f) {
        return m.sensitivity(row, f) <= -0.8 * kStrongSensitivity;
    };
    for (Eigen::Index i = 98; i < 118; ++i) CHECK(strong(i, 0));
    CHECK_FALSE(strong(97, 0));
    // bus 54 -> row 53 -> rows 43..62
    for (Eigen::Index i = 43; i < 63; ++i) CHECK(strong(i, 1));
    CHECK_FALSE(strong(42, 1));
    CHECK_FALSE(strong(63, 1));
    CHECK(std::abs(m.sensitivity(0, 1)) < 1e-3 * kStrongSensitivity);

    CHECK(build_surrogate(118, {"bus117", "bus54"}, 118).sensitivity == m.sensitivity);
    CHECK(build_surrogate(30, {"load"}, 4).sensitivity.cols() == 1);
}

TEST_CASE("generate") {
    const auto spec = preset(1);
    const auto d = generate(spec);
    CHECK(d.status.rows() == 118);
    CHECK(d.status.cols() == 1000);
    CHECK(d.status.times.front() == 1);
    CHECK(d.status.variables[116] == "v117");
    REQUIRE(d.factors.size() == 2);
    CHECK(d.factors[0].name == "bus117");
    CHECK(d.factors[0].k == 59);
    CHECK(d.true_loads[0][500] == 120.0);

    SUBCASE("factor samples are held over each stride") {
        const auto& v = d.factors[0].values;
        for (std::size_t j = 0; j < 1000; j += 50)
            for (std::size_t i = j; i < j + 50; ++i) CHECK(v[i] == v[j]);
        CHECK(std::abs(v[0] / 20.0 - 1.0) < 1e-3);
    }
    SUBCASE("identical seeds regenerate identical data") {
        const auto again = generate(spec);
        CHECK(again.status.values == d.status.values);
        CHECK(again.factors[1].values == d.factors[1].values);
    }
    SUBCASE("noiseless status equals the linear surrogate response") {
        auto quiet = spec;
        quiet.noise_level = 0.0;
        const auto q = generate(quiet);
        const auto m = build_surrogate(118, {"bus117", "bus54"}, spec.sensitivity_seed);
        CHECK(q.status.values(110, 600) == doctest::Approx(m.baseline(110) + m.sensitivity(110, 0) * 100.0));
        CHECK(q.status.values(110, 100) == doctest::Approx(m.baseline(110)));
        CHECK(q.factors[0].values[700] == 120.0);
    }
    SUBCASE("status noise does not depend on the load schedule") {
        auto a = preset(2), b = preset(3);
        const auto da = generate(a), db = generate(b);
        const auto ma = build_surrogate(118, {"bus117", "bus54"}, 118);
        const RealMatrix na = da.status.values - ma.baseline.replicate(1, 1000);
        const RealMatrix nb = db.status.values - ma.baseline.replicate(1, 1000);
        // before any load moves, both cases carry the same noise
        CHECK((na.leftCols(300) - nb.leftCols(300)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("responding rows exceed the noise 5:1 for the case 1 step") {
        const double response = kStrongSensitivity * 0.8 * 100.0;
        CHECK(response / spec.noise_level >= 5.0);
    }
}
