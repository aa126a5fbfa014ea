#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmtcorr/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rmtcorr::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("rmtcorr_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("laws reports the inner radius") {
    const auto dir = scratch("laws");
    const auto r = cli({"laws", "--c", "0.4917", "--L", "1", "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    const auto at = r.out.find("inner radius ");
    REQUIRE(at != std::string::npos);
    CHECK(std::lround(std::stod(r.out.substr(at + 13)) * 1e4) == 7130);
    CHECK(fs::exists(dir / "ring_law.csv"));
    CHECK(fs::exists(dir / "mp_law.csv"));
    CHECK(slurp(dir / "run_meta.json").find("inner_radius") != std::string::npos);
}

TEST_CASE("usage errors exit nonzero with a diagnostic") {
    auto r = cli({"analyze", "--bogus"});
    CHECK(r.code != 0);
    CHECK_FALSE(r.err.empty());

    r = cli({"analyze", "--case", "1", "--T", "1"});
    CHECK(r.code != 0);
    CHECK(r.err.find("T") != std::string::npos);

    r = cli({"simulate", "--case", "9", "--out-dir", scratch("bad_case").string()});
    CHECK(r.code != 0);

    r = cli({"laws", "--c", "1.5"});
    CHECK(r.code != 0);
}

TEST_CASE("a source shorter than the window is rejected") {
    const auto dir = scratch("short");
    {
        std::ofstream f(dir / "short.csv");
        f << "time,a,b,c\n";
        for (int t = 1; t <= 10; ++t) f << t << ',' << t * 0.1 << ',' << (t % 3) << ',' << (t * t % 7) << '\n';
    }
    const auto r = cli({"analyze", "--input", (dir / "short.csv").string(), "--out-dir", dir.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("insufficient history") != std::string::npos);
}

TEST_CASE("the standalone binary returns the process exit status") {
    const std::string bin = RMTCORR_CLI_PATH;
    CHECK(std::system((bin + " laws --c 0.5 --out-dir " + scratch("bin").string() + " > /dev/null").c_str()) == 0);
    CHECK(std::system((bin + " nonsense > /dev/null 2>&1").c_str()) != 0);
}

TEST_CASE("simulate, then analyze and correlate the written data source") {
    const auto sim = scratch("sim");
    REQUIRE(cli({"simulate", "--case", "1", "--out-dir", sim.string()}).code == 0);
    const auto csv = sim / "datasource.csv";
    REQUIRE(fs::exists(csv));
    CHECK(fs::exists(sim / "run_meta.json"));

    SUBCASE("ingesting the written preset reproduces the in-memory run byte for byte") {
        const auto a = scratch("from_file");
        const auto b = scratch("from_case");
        REQUIRE(cli({"analyze", "--input", csv.string(), "--out-dir", a.string()}).code == 0);
        REQUIRE(cli({"analyze", "--case", "1", "--out-dir", b.string()}).code == 0);
        const auto curve = slurp(a / "msr_curve.csv");
        CHECK(curve.size() > 1000);
        CHECK(curve == slurp(b / "msr_curve.csv"));
        CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));
        CHECK(slurp(a / "events.csv") == "area_start,area_end,onset,inferred_duration\n501,740,501,0\n");
    }
    SUBCASE("correlate attributes the case 1 step to bus 117") {
        const auto out = scratch("correlate");
        const auto r = cli({"correlate", "--input", csv.string(), "--factor", "bus117", "--out-dir",
                            out.string(), "--emit", "verdicts"});
        REQUIRE(r.code == 0);
        const auto v = slurp(out / "verdicts.csv");
        CHECK(v.find("bus117,true,") != std::string::npos);
        CHECK(v.find("bus54") == std::string::npos);
    }
}
