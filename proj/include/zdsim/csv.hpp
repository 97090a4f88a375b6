#pragma once

// CSV serialization of traces, events and plot-ready residual series.
// Floats use 17 significant digits so a parse reproduces them exactly.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "zdsim/sim_engine.hpp"

namespace zdsim::csv {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad number in CSV: '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline void write_trace(std::ostream& os, const SimTrace& tr) {
    for (std::size_t c = 0; c < tr.columns.size(); ++c) os << (c ? "," : "") << tr.columns[c];
    os << '\n';
    const std::size_t w = tr.columns.size();
    for (std::size_t r = 0; r < tr.rows(); ++r) {
        for (std::size_t c = 0; c < w; ++c) os << (c ? "," : "") << format_double(tr.data[r * w + c]);
        os << '\n';
    }
}

struct Table {
    std::vector<std::string> columns;
    std::vector<double> data;
    std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
};

inline Table read_trace(std::istream& is) {
    Table t;
    std::string line;
    if (!std::getline(is, line)) return t;
    t.columns = split(line);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != t.columns.size())
            throw ConfigError("CSV line " + std::to_string(lineno) + ": expected " +
                              std::to_string(t.columns.size()) + " fields, got " + std::to_string(fields.size()));
        for (const auto& f : fields) t.data.push_back(parse_double(f));
    }
    return t;
}

/// channel,index,tick,scheduled_time,arrival_time,computed_next_time,m,value
/// where value lists the transmitted vector separated by ';'.
inline void write_events(std::ostream& os, const SimTrace& tr) {
    os << "channel,index,tick,scheduled_time,arrival_time,computed_next_time,m,value\n";
    for (const auto& e : tr.events) {
        os << to_string(e.channel) << ',' << e.index << ',' << e.tick << ',' << format_double(e.scheduled_time) << ','
           << format_double(e.arrival_time) << ',' << format_double(e.plant_next_time) << ','
           << format_double(e.m_term) << ',';
        for (Eigen::Index i = 0; i < e.value.size(); ++i) os << (i ? ";" : "") << format_double(e.value(i));
        os << '\n';
    }
}

inline std::vector<EventRecord> read_events(std::istream& is) {
    std::vector<EventRecord> out;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 8) throw ConfigError("events CSV: expected 8 fields, got " + std::to_string(f.size()));
        EventRecord e;
        e.channel = f[0] == "output" ? Channel::output : Channel::auxiliary;
        e.index = std::stoll(f[1]);
        e.tick = std::stoll(f[2]);
        e.scheduled_time = parse_double(f[3]);
        e.arrival_time = parse_double(f[4]);
        e.plant_next_time = parse_double(f[5]);
        e.m_term = parse_double(f[6]);
        const auto vals = f[7].empty() ? std::vector<std::string>{} : split(f[7], ';');
        e.value.resize(static_cast<Eigen::Index>(vals.size()));
        for (std::size_t i = 0; i < vals.size(); ++i) e.value(static_cast<Eigen::Index>(i)) = parse_double(vals[i]);
        out.push_back(std::move(e));
    }
    return out;
}

namespace fs = std::filesystem;

inline std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write " + p.string());
    return os;
}

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

/// res_z.csv, dis_t.csv, res_x.csv as (t, value) pairs plus thresholds.csv.
inline void export_residual_plots_data(const SimTrace& tr, const Thresholds& th, const fs::path& dir) {
    ensure_dir(dir);
    const struct {
        const char* name;
        double ResidualRecord::*field;
    } series[] = {{"res_z", &ResidualRecord::res_z}, {"dis_t", &ResidualRecord::dis_t}, {"res_x", &ResidualRecord::res_x}};
    for (const auto& s : series) {
        auto os = open_out(dir / (std::string(s.name) + ".csv"));
        os << "t," << s.name << '\n';
        for (const auto& r : tr.residuals) os << format_double(r.t) << ',' << format_double(r.*(s.field)) << '\n';
    }
    auto os = open_out(dir / "thresholds.csv");
    os << "name,value\n";
    os << "gamma_z," << format_double(th.gamma_z) << '\n';
    os << "gamma_x," << format_double(th.gamma_x) << '\n';
    os << "dis_t_latency," << format_double(th.latency) << '\n';
}

inline void write_run_outputs(const SimTrace& tr, const Thresholds& th, const fs::path& dir) {
    ensure_dir(dir);
    {
        auto os = open_out(dir / "trace.csv");
        write_trace(os, tr);
    }
    {
        auto os = open_out(dir / "events.csv");
        write_events(os, tr);
    }
    export_residual_plots_data(tr, th, dir);
}

}  // namespace zdsim::csv
