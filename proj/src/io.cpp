#include "rmtcorr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rmtcorr/error.hpp"

namespace rmtcorr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    return f;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return {buf, p};
}

DataSource parse_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) throw Error(source_name + ": empty file, expected a header row");
    const auto header = split_line(line);
    if (header.size() < 2) throw Error(source_name + ": header needs a time column and at least one variable");

    DataSource ds;
    for (std::size_t c = 1; c < header.size(); ++c) ds.variables.push_back(trim(header[c]));

    const std::size_t nvar = ds.variables.size();
    std::vector<std::vector<double>> columns(nvar);
    std::vector<double> held(nvar, std::numeric_limits<double>::quiet_NaN());
    std::set<TimeIndex> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream os;
            os << source_name << ": line " << line_no << " has " << cells.size() << " cells, header has "
               << header.size();
            throw Error(os.str());
        }
        double tv = 0.0;
        const std::string tcell = trim(cells[0]);
        if (!parse_number(tcell, tv) || tv != std::floor(tv)) {
            std::ostringstream os;
            os << source_name << ": line " << line_no << ", column 1: time index '" << tcell
               << "' is not an integer";
            throw Error(os.str());
        }
        const auto t = static_cast<TimeIndex>(tv);
        if (!seen.insert(t).second) {
            std::ostringstream os;
            os << source_name << ": line " << line_no << ": duplicate time index " << t;
            throw Error(os.str());
        }
        ds.times.push_back(t);
        for (std::size_t c = 0; c < nvar; ++c) {
            const std::string cell = trim(cells[c + 1]);
            double v = 0.0;
            if (cell.empty()) {
                if (std::isnan(held[c])) {
                    std::ostringstream os;
                    os << source_name << ": line " << line_no << ", column " << c + 2 << " ("
                       << ds.variables[c] << "): empty cell with no earlier sample to hold";
                    throw Error(os.str());
                }
                v = held[c];
            } else if (!parse_number(cell, v) || !std::isfinite(v)) {
                std::ostringstream os;
                os << source_name << ": line " << line_no << ", column " << c + 2 << " (" << ds.variables[c]
                   << "): '" << cell << "' is not a finite number";
                throw Error(os.str());
            }
            held[c] = v;
            columns[c].push_back(v);
        }
    }
    if (ds.times.empty()) throw Error(source_name + ": no data rows");

    // Files are time-ordered rows; internally variables are rows.
    ds.values.resize(static_cast<Eigen::Index>(nvar), static_cast<Eigen::Index>(ds.times.size()));
    for (std::size_t c = 0; c < nvar; ++c)
        for (std::size_t j = 0; j < ds.times.size(); ++j)
            ds.values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = columns[c][j];
    ds.validate();
    return ds;
}

DataSource ingest_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open input file " + path.string());
    return parse_csv(f, path.string());
}

void write_csv(std::ostream& out, const DataSource& ds) {
    out << "time";
    for (const auto& v : ds.variables) out << ',' << v;
    out << '\n';
    for (Eigen::Index j = 0; j < ds.cols(); ++j) {
        out << ds.times[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < ds.rows(); ++i) out << ',' << format_double(ds.values(i, j));
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const DataSource& ds) {
    auto f = open_out(path);
    write_csv(f, ds);
}

DataSource scenario_source(const ScenarioData& data) {
    DataSource ds;
    ds.times = data.status.times;
    ds.variables = data.status.variables;
    const Eigen::Index n = data.status.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(data.factors.size());
    ds.values.resize(n + m, data.status.cols());
    ds.values.topRows(n) = data.status.values;
    for (Eigen::Index f = 0; f < m; ++f) {
        const auto& fac = data.factors[static_cast<std::size_t>(f)];
        ds.variables.push_back(std::string(kFactorPrefix) + fac.name);
        ds.values.row(n + f) =
            Eigen::Map<const Eigen::RowVectorXd>(fac.values.data(), static_cast<Eigen::Index>(fac.values.size()));
    }
    return ds;
}

SplitSource split_factors(const DataSource& ds, const std::vector<std::string>& selected, int k, double rho) {
    const std::unordered_set<std::string> wanted(selected.begin(), selected.end());
    std::vector<Eigen::Index> status_rows;
    std::vector<std::pair<std::string, Eigen::Index>> factor_rows;
    std::unordered_set<std::string> found;
    for (std::size_t i = 0; i < ds.variables.size(); ++i) {
        const std::string& v = ds.variables[i];
        const bool prefixed = v.rfind(kFactorPrefix, 0) == 0;
        const std::string name = prefixed ? v.substr(kFactorPrefix.size()) : v;
        if (prefixed || wanted.contains(v)) {
            if (wanted.empty() || wanted.contains(name)) {
                factor_rows.emplace_back(name, static_cast<Eigen::Index>(i));
                found.insert(name);
            }
        } else {
            status_rows.push_back(static_cast<Eigen::Index>(i));
        }
    }
    for (const auto& s : selected)
        if (!found.contains(s)) throw Error("factor '" + s + "' not found in the input columns");
    if (status_rows.empty()) throw Error("input has no status columns");

    SplitSource out;
    out.status.times = ds.times;
    out.status.values.resize(static_cast<Eigen::Index>(status_rows.size()), ds.cols());
    for (std::size_t r = 0; r < status_rows.size(); ++r) {
        out.status.variables.push_back(ds.variables[static_cast<std::size_t>(status_rows[r])]);
        out.status.values.row(static_cast<Eigen::Index>(r)) = ds.values.row(status_rows[r]);
    }
    const int kk = k > 0 ? k : default_replication(out.status.rows());
    for (const auto& [name, row] : factor_rows) {
        FactorSpec f;
        f.name = name;
        f.k = kk;
        f.rho = rho;
        f.values.resize(static_cast<std::size_t>(ds.cols()));
        for (Eigen::Index j = 0; j < ds.cols(); ++j) f.values[static_cast<std::size_t>(j)] = ds.values(row, j);
        out.factors.push_back(std::move(f));
    }
    return out;
}

void write_msr_curve(const std::filesystem::path& path, const CurveSet& curves) {
    if (curves.status == nullptr) throw Error("write_msr_curve: no status series");
    for (const auto* f : curves.factors)
        if (f->times != curves.status->times) throw Error("write_msr_curve: series time axes differ");
    auto out = open_out(path);
    out << "time,msr_status,vsr_status";
    for (const auto* f : curves.factors) out << ",msr_" << f->factor_name << ",vsr_" << f->factor_name;
    out << '\n';
    const auto& s = *curves.status;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out << s.times[i] << ',' << format_double(s.msr_values[i]) << ',' << format_double(s.vsr_values[i]);
        for (const auto* f : curves.factors)
            out << ',' << format_double(f->msr_values[i]) << ',' << format_double(f->vsr_values[i]);
        out << '\n';
    }
}

void write_events(const std::filesystem::path& path, const std::vector<SignalEvent>& events) {
    auto out = open_out(path);
    out << "area_start,area_end,onset,inferred_duration\n";
    for (const auto& e : events)
        out << e.area_start << ',' << e.area_end << ',' << e.onset << ',' << e.inferred_duration << '\n';
}

void write_verdicts(const std::filesystem::path& path, const std::vector<FactorVerdict>& verdicts) {
    auto out = open_out(path);
    out << "factor,correlated,msr_drop,min_msr,inner_radius,excursions\n";
    for (const auto& v : verdicts) {
        out << v.factor << ',' << (v.correlated ? "true" : "false") << ',' << format_double(v.msr_drop) << ','
            << format_double(v.min_msr) << ',' << format_double(v.inner_radius) << ',';
        for (std::size_t i = 0; i < v.excursions.size(); ++i) {
            if (i) out << ';';
            out << v.excursions[i].area_start << '-' << v.excursions[i].area_end;
        }
        out << '\n';
    }
}

void write_ring_scatter(const std::filesystem::path& path, const std::vector<ScatterEntry>& entries) {
    auto out = open_out(path);
    out << "source,real,imag,modulus\n";
    for (const auto& e : entries)
        for (const auto& l : e.spectrum->eigenvalues)
            out << e.source << ',' << format_double(l.real()) << ',' << format_double(l.imag()) << ','
                << format_double(std::abs(l)) << '\n';
}

void write_kde_curve(const std::filesystem::path& path, const std::vector<KdeEntry>& entries) {
    auto out = open_out(path);
    out << "source,lambda,kde,mp\n";
    for (const auto& e : entries)
        for (std::size_t i = 0; i < e.curve.kde.grid.size(); ++i)
            out << e.source << ',' << format_double(e.curve.kde.grid[i]) << ','
                << format_double(e.curve.kde.density[i]) << ',' << format_double(e.curve.mp_density[i]) << '\n';
}

}  // namespace rmtcorr
