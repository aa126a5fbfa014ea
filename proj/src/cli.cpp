#include "rmtcorr/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtcorr/error.hpp"
#include "rmtcorr/indicators.hpp"
#include "rmtcorr/io.hpp"
#include "rmtcorr/pipeline.hpp"
#include "rmtcorr/scenario.hpp"

namespace rmtcorr {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 1;

struct RunConfig {
    std::string input;
    int case_id = 0;
    int T = 240;
    int L = 1;
    int k = 0;  // 0: floor(n/2)
    double rho = 500.0;
    double noise_level = 1e-4;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> factors;
    std::string out_dir = ".";
    std::vector<std::string> emit;
    std::vector<long long> at;
};

struct LawsConfig {
    double c = 0.0;
    int L = 1;
    double d = 1.0;
    int points = 201;
    std::string out_dir = ".";
};

void check_config(const RunConfig& cfg, bool needs_source) {
    if (needs_source && cfg.input.empty() && cfg.case_id == 0)
        throw Error("--input/--case: exactly one data source is required");
    if (cfg.T < 2) throw Error("--T: window length must be >= 2");
    if (cfg.L < 1) throw Error("--L: product length must be >= 1");
    if (cfg.k < 0) throw Error("--k: replication count must be >= 1 (0 selects floor(n/2))");
    if (!(cfg.rho > 0.0)) throw Error("--rho: signal-to-noise ratio must be positive");
    if (!(cfg.noise_level >= 0.0)) throw Error("--noise-level: must be >= 0");
}

ScenarioSpec scenario_for(const RunConfig& cfg) {
    ScenarioSpec spec = preset(cfg.case_id);
    spec.noise_level = cfg.noise_level;
    return spec;
}

DataSource load_source(const RunConfig& cfg) {
    if (!cfg.input.empty()) return ingest_csv(cfg.input);
    return scenario_source(generate(scenario_for(cfg)));
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    if (!cfg.input.empty()) j["input"] = cfg.input;
    else j["case"] = cfg.case_id;
    j["T"] = cfg.T;
    j["L"] = cfg.L;
    j["k"] = cfg.k;
    j["rho"] = cfg.rho;
    j["noise_level"] = cfg.noise_level;
    j["seed"] = cfg.seed;
    j["factors"] = cfg.factors;
    return j;
}

ordered_json series_json(const IndicatorSeries& s) {
    ordered_json j;
    j["source"] = s.source_label();
    j["rows"] = s.rows;
    j["inner_radius"] = s.inner_radius;
    j["outer_radius"] = 1.0;
    j["theoretical_msr"] = s.theoretical_msr;
    return j;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.case_id == 0) throw Error("--case: simulate needs a scenario case (1-4)");
    check_config(cfg, false);
    ScenarioSpec spec = scenario_for(cfg);
    if (cfg.seed != kDefaultSeed) spec.noise_seed = cfg.seed;
    const ScenarioData data = generate(spec);
    fs::create_directories(cfg.out_dir);
    const fs::path csv = fs::path(cfg.out_dir) / "datasource.csv";
    write_csv(csv, scenario_source(data));

    ordered_json meta;
    meta["command"] = "simulate";
    meta["case"] = spec.case_id;
    meta["n_status"] = spec.n_status;
    meta["horizon"] = spec.horizon;
    meta["factor_sample_stride"] = spec.factor_sample_stride;
    meta["noise_level"] = spec.noise_level;
    meta["sensitivity_seed"] = spec.sensitivity_seed;
    meta["noise_seed"] = spec.noise_seed;
    ordered_json factors = ordered_json::array();
    for (const auto& [name, shape] : spec.factors) {
        ordered_json f;
        f["name"] = name;
        f["kind"] = shape_kind_name(shape.kind);
        ordered_json segs = ordered_json::array();
        for (const auto& s : shape.segments) segs.push_back({{"start", s.start}, {"end", s.end}, {"level", s.level}});
        f["segments"] = segs;
        factors.push_back(f);
    }
    meta["factors"] = factors;
    write_json(fs::path(cfg.out_dir) / "run_meta.json", meta);
    out << "wrote " << csv.string() << " (" << data.status.rows() << " status variables, "
        << data.factors.size() << " factors, " << data.status.cols() << " sampling times)\n";
    return 0;
}

int cmd_analyze(RunConfig cfg, bool correlate, std::ostream& out) {
    check_config(cfg, true);
    const std::set<std::string> emit_known = {"msr_curve", "ring_scatter", "kde_curve", "events", "verdicts"};
    std::set<std::string> emit(cfg.emit.begin(), cfg.emit.end());
    if (emit.empty()) {
        emit = {"msr_curve", "events"};
        if (correlate) emit.insert("verdicts");
    }
    if (!cfg.at.empty()) emit.insert({"ring_scatter", "kde_curve"});
    if (!correlate && emit.contains("verdicts")) throw Error("--emit: verdicts needs the correlate command");
    const bool inspect = emit.contains("ring_scatter") || emit.contains("kde_curve");
    if (inspect && cfg.at.empty()) {
        if (cfg.case_id != 0) cfg.at = {500, 620};
        else throw Error("--at: ring_scatter/kde_curve need at least one inspection time");
    }

    const DataSource ds = load_source(cfg);
    const SplitSource split = split_factors(ds, cfg.factors, cfg.k, cfg.rho);
    const DataSource& status = split.status;
    if (status.cols() < cfg.T) {
        std::ostringstream os;
        os << "insufficient history: input has " << status.cols() << " sampling times but the window needs T="
           << cfg.T;
        throw Error(os.str());
    }
    if (status.rows() > cfg.T) {
        std::ostringstream os;
        os << "--T: window length " << cfg.T << " is shorter than the " << status.rows()
           << " status variables; the ring law needs N <= T";
        throw Error(os.str());
    }
    const WindowConfig wcfg{cfg.T, cfg.L};

    CorrelationReport report;
    if (correlate) {
        if (split.factors.empty()) throw Error("--factor: input has no factor columns to correlate");
        report = correlation_analysis(status, split.factors, wcfg, cfg.seed);
    } else {
        report.status = run_series(status, wcfg, cfg.seed);
        report.events = detect_signal_areas(report.status);
    }

    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    if (emit.contains("msr_curve")) {
        CurveSet cs{&report.status, {}};
        for (const auto& f : report.factors) cs.factors.push_back(&f.series);
        write_msr_curve(dir / "msr_curve.csv", cs);
    }
    if (emit.contains("events")) write_events(dir / "events.csv", report.events);
    if (emit.contains("verdicts")) {
        std::vector<FactorVerdict> vs;
        for (const auto& f : report.factors) vs.push_back(f.verdict);
        write_verdicts(dir / "verdicts.csv", vs);
    }

    if (inspect) {
        const auto status_u = run_unitaries(status.rows(), cfg.L, cfg.seed);
        std::vector<AugmentedFrame> frames;
        for (const auto& f : split.factors)
            if (correlate)
                frames.push_back(assemble_augmented(
                    status.values, build_factor_matrix(f, derive_seed(cfg.seed, "factor-noise:" + f.name))));
        for (long long t : cfg.at) {
            const auto it = std::find(status.times.begin(), status.times.end(), t);
            if (it == status.times.end()) throw Error("--at: time " + std::to_string(t) + " not in the input");
            const Eigen::Index pos = (it - status.times.begin()) + 1;
            const auto win = real_time_window(status, pos, wcfg);
            std::vector<WindowAnalysis> analyses{analyze_window(win, wcfg, status_u)};
            std::vector<std::string> names{"status"};
            for (std::size_t f = 0; f < frames.size(); ++f) {
                DataSource aug{{}, status.times, frames[f].stacked};
                aug.variables.resize(static_cast<std::size_t>(aug.values.rows()));
                const auto aw = real_time_window(aug, pos, wcfg);
                analyses.push_back(analyze_window(aw, wcfg, run_unitaries(aug.rows(), cfg.L, cfg.seed)));
                names.push_back(split.factors[f].name);
            }
            if (emit.contains("ring_scatter")) {
                std::vector<ScatterEntry> entries;
                for (std::size_t i = 0; i < analyses.size(); ++i) entries.push_back({names[i], &analyses[i].ring});
                write_ring_scatter(dir / ("ring_scatter_" + std::to_string(t) + ".csv"), entries);
            }
            if (emit.contains("kde_curve")) {
                std::vector<KdeEntry> entries;
                for (std::size_t i = 0; i < analyses.size(); ++i)
                    entries.push_back({names[i], compare_with_mp(analyses[i].covariance)});
                write_kde_curve(dir / ("kde_curve_" + std::to_string(t) + ".csv"), entries);
            }
        }
    }

    ordered_json meta;
    meta["command"] = correlate ? "correlate" : "analyze";
    meta["config"] = config_json(cfg);
    meta["kernel"] = "gaussian";
    meta["bandwidth_rule"] = "silverman";
    meta["detection"] = {{"open_run", DetectionConfig{}.open_run}, {"close_run", DetectionConfig{}.close_run}};
    ordered_json sources = ordered_json::array();
    sources.push_back(series_json(report.status));
    for (const auto& f : report.factors) {
        auto j = series_json(f.series);
        j["noise_magnitude"] = f.noise_magnitude;
        j["noise_seed"] = derive_seed(cfg.seed, "factor-noise:" + f.series.factor_name);
        sources.push_back(j);
    }
    meta["sources"] = sources;
    meta["events"] = report.events.size();
    write_json(dir / "run_meta.json", meta);

    out << report.events.size() << " signal area(s)\n";
    for (const auto& e : report.events)
        out << "  area " << e.area_start << "-" << e.area_end << ", inferred duration " << e.inferred_duration << '\n';
    for (const auto& f : report.factors)
        out << "  " << f.verdict.factor << ": " << (f.verdict.correlated ? "correlated" : "not correlated") << '\n';
    return 0;
}

int cmd_laws(const LawsConfig& cfg, std::ostream& out) {
    if (cfg.points < 2) throw Error("--points: need at least 2 grid points");
    const RingLawParams ring(cfg.c, cfg.L);
    const MPLawParams mp(cfg.c, cfg.d);
    const auto radii = ring_radii(ring);
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    {
        std::ofstream f(dir / "ring_law.csv");
        if (!f) throw Error("cannot write ring_law.csv");
        f << "radius,density\n";
        for (int i = 0; i < cfg.points; ++i) {
            const double r = 1.1 * i / (cfg.points - 1);
            f << format_double(r) << ',' << format_double(ring_law_pdf(r, ring)) << '\n';
        }
    }
    {
        std::ofstream f(dir / "mp_law.csv");
        if (!f) throw Error("cannot write mp_law.csv");
        f << "lambda,density\n";
        for (int i = 0; i < cfg.points; ++i) {
            const double l = 1.1 * mp.upper() * i / (cfg.points - 1);
            f << format_double(l) << ',' << format_double(mp_law_pdf(l, mp)) << '\n';
        }
    }
    ordered_json meta;
    meta["command"] = "laws";
    meta["c"] = cfg.c;
    meta["L"] = cfg.L;
    meta["d"] = cfg.d;
    meta["inner_radius"] = radii.inner;
    meta["outer_radius"] = radii.outer;
    meta["theoretical_msr"] = theoretical_msr(ring);
    meta["mp_lower"] = mp.lower();
    meta["mp_upper"] = mp.upper();
    write_json(dir / "run_meta.json", meta);
    out << "inner radius " << format_double(radii.inner) << ", outer radius 1, M-P support ["
        << format_double(mp.lower()) << ", " << format_double(mp.upper()) << "]\n";
    return 0;
}

void add_run_options(CLI::App* sub, RunConfig& cfg) {
    auto* input = sub->add_option("--input", cfg.input, "data source CSV (time column + one column per variable)")
                      ->check(CLI::ExistingFile);
    auto* cs = sub->add_option("--case", cfg.case_id, "scenario preset instead of an input file")
                   ->check(CLI::Range(1, 4));
    input->excludes(cs);
    sub->add_option("--T", cfg.T, "window length")->capture_default_str();
    sub->add_option("--L", cfg.L, "matrix product length")->capture_default_str();
    sub->add_option("--k", cfg.k, "factor replication count (default floor(n/2))");
    sub->add_option("--rho", cfg.rho, "factor matrix signal-to-noise ratio")->capture_default_str();
    sub->add_option("--noise-level", cfg.noise_level, "scenario white-noise level")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "analysis seed (Haar factors, factor noise)")->capture_default_str();
    sub->add_option("--factor", cfg.factors, "factor column to correlate (repeatable)");
    sub->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_option("--emit", cfg.emit, "outputs: msr_curve, ring_scatter, kde_curve, events, verdicts")
        ->check(CLI::IsMember({"msr_curve", "ring_scatter", "kde_curve", "events", "verdicts"}));
    sub->add_option("--at", cfg.at, "inspection times for ring_scatter / kde_curve");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-matrix signal detection and factor correlation analysis", "rmtcorr"};
    app.require_subcommand(1, 1);

    RunConfig sim_cfg, an_cfg, co_cfg;
    LawsConfig laws_cfg;

    auto* sim = app.add_subcommand("simulate", "write a scenario data source");
    sim->add_option("--case", sim_cfg.case_id, "scenario preset")->required()->check(CLI::Range(1, 4));
    sim->add_option("--noise-level", sim_cfg.noise_level, "white-noise level")->capture_default_str();
    sim->add_option("--seed", sim_cfg.seed, "measurement noise seed (default: the preset's)");
    sim->add_option("--out-dir", sim_cfg.out_dir, "output directory")->capture_default_str();

    auto* an = app.add_subcommand("analyze", "status-only MSR curve and signal areas");
    add_run_options(an, an_cfg);
    auto* co = app.add_subcommand("correlate", "signal areas plus per-factor verdicts");
    add_run_options(co, co_cfg);

    auto* laws = app.add_subcommand("laws", "Ring Law and M-P Law references");
    laws->add_option("--c", laws_cfg.c, "aspect ratio N/T in (0, 1]")->required();
    laws->add_option("--L", laws_cfg.L, "matrix product length")->capture_default_str();
    laws->add_option("--d", laws_cfg.d, "entry variance for the M-P law")->capture_default_str();
    laws->add_option("--points", laws_cfg.points, "grid points")->capture_default_str();
    laws->add_option("--out-dir", laws_cfg.out_dir, "output directory")->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_cfg, out);
        if (an->parsed()) return cmd_analyze(an_cfg, false, out);
        if (co->parsed()) return cmd_analyze(co_cfg, true, out);
        if (laws->parsed()) return cmd_laws(laws_cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace rmtcorr
