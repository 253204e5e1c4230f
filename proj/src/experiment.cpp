/*
   Copyright 2026 The mcd2d Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include "mcd2d/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mcd2d/error.hpp"

#ifndef MCD2D_VERSION
#define MCD2D_VERSION "unknown"
#endif

namespace mcd2d {

const char* version() { return MCD2D_VERSION; }

const char* to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::threshold: return "threshold";
    case SweepParam::distance: return "distance";
    case SweepParam::tau_m: return "tau_m";
    case SweepParam::cluster_radius: return "cluster_radius";
    case SweepParam::alpha: return "alpha";
    case SweepParam::lambda_m: return "lambda_m";
    }
    return "?";
}

const char* to_string(RunMode m)
{
    switch (m) {
    case RunMode::analytic: return "analytic";
    case RunMode::sim: return "sim";
    case RunMode::both: return "both";
    }
    return "?";
}

SimConfig ExperimentConfig::default_sim()
{
    SimConfig c;
    c.seed = kDefaultSeed;
    return c;
}

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Value text with any whitespace-preceded ';' or '#' comment removed.
std::string field(const std::string& s)
{
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i] == ';' || s[i] == '#') && (s[i - 1] == ' ' || s[i - 1] == '\t'))
            return trim(s.substr(0, i));
    return trim(s);
}

/// Line of every "[section] key" in the raw text, for diagnostics.
std::map<std::string, int> key_lines(const std::string& text)
{
    std::map<std::string, int> out;
    std::istringstream in(text);
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#')
            continue;
        if (t.front() == '[' && t.back() == ']')
            section = trim(t.substr(1, t.size() - 2));
        else if (const auto eq = t.find('='); eq != std::string::npos)
            out.emplace(section + "." + trim(t.substr(0, eq)), n);
    }
    return out;
}

class Reader {
public:
    Reader(std::string source, std::map<std::string, int> lines)
        : source_(std::move(source)), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& what) const
    {
        std::string where = source_;
        if (auto it = lines_.find(section + "." + key); it != lines_.end())
            where += ":" + std::to_string(it->second);
        throw ConfigError(where + ": [" + section + "] " + key + ": " + what);
    }

    double number(const std::string& s, const std::string& k, const std::string& v) const
    {
        double x = 0.0;
        const char* end = v.data() + v.size();
        auto [ptr, ec] = std::from_chars(v.data(), end, x);
        if (ec != std::errc() || ptr != end || !std::isfinite(x))
            fail(s, k, "expected a finite number, got '" + v + "'");
        return x;
    }

    long integer(const std::string& s, const std::string& k, const std::string& v) const
    {
        long x = 0;
        const char* end = v.data() + v.size();
        auto [ptr, ec] = std::from_chars(v.data(), end, x);
        if (ec != std::errc() || ptr != end)
            fail(s, k, "expected an integer, got '" + v + "'");
        return x;
    }

    bool boolean(const std::string& s, const std::string& k, const std::string& v) const
    {
        if (v == "true" || v == "yes" || v == "on" || v == "1")
            return true;
        if (v == "false" || v == "no" || v == "off" || v == "0")
            return false;
        fail(s, k, "expected true or false, got '" + v + "'");
    }

    std::vector<std::string> list(const std::string& v) const
    {
        std::vector<std::string> out;
        std::istringstream in(v);
        std::string item;
        while (std::getline(in, item, ','))
            if (auto t = trim(item); !t.empty())
                out.push_back(t);
        return out;
    }

    std::vector<double> numbers(const std::string& s, const std::string& k,
                                const std::string& v) const
    {
        std::vector<double> out;
        for (const auto& item : list(v))
            out.push_back(number(s, k, item));
        if (out.empty())
            fail(s, k, "empty list");
        return out;
    }

private:
    std::string source_;
    std::map<std::string, int> lines_;
};

/// Key name without a unit suffix, and the conversion the suffix implies.
struct Unit {
    std::string base;
    enum { linear, db, dbm } kind = linear;
};

Unit split_unit(const std::string& key)
{
    auto ends = [&](const char* suf) {
        const std::string s(suf);
        return key.size() > s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0;
    };
    if (ends("_dbm"))
        return {key.substr(0, key.size() - 4), Unit::dbm};
    if (ends("_db"))
        return {key.substr(0, key.size() - 3), Unit::db};
    return {key, Unit::linear};
}

void read_system(const pt::ptree& sec, const Reader& rd, SystemParams& p)
{
    const std::string s = "system";
    for (const auto& [key, node] : sec) {
        const std::string v = field(node.data());
        const Unit u = split_unit(key);
        const bool power = u.base == "p_bs" || u.base == "p_d2d" || u.base == "noise_power";
        if (u.kind != Unit::linear && !(power || u.base == "threshold"))
            rd.fail(s, key, "no dB form for this field");
        if (u.kind == Unit::dbm && !power)
            rd.fail(s, key, "dBm applies to powers only");
        auto value = [&] {
            const double x = rd.number(s, key, v);
            switch (u.kind) {
            case Unit::db: return db_to_linear(x);
            case Unit::dbm: return dbm_to_watts(x);
            default: return x;
            }
        };
        if (u.base == "lambda_b") p.lambda_b = value();
        else if (u.base == "lambda_m") p.lambda_m = value();
        else if (u.base == "lambda_r") p.lambda_r = value();
        else if (u.base == "cluster_radius") p.cluster_radius = value();
        else if (u.base == "threshold") p.threshold = value();
        else if (u.base == "alpha") p.alpha = value();
        else if (u.base == "pathloss_intercept") p.pathloss_intercept = value();
        else if (u.base == "p_bs") p.p_bs = value();
        else if (u.base == "p_d2d") p.p_d2d = value();
        else if (u.base == "noise_power") p.noise_power = value();
        else if (u.base == "eta") p.eta = value();
        else if (key == "tau_m") p.tau_m = static_cast<int>(rd.integer(s, key, v));
        else if (key == "budget") p.budget = static_cast<int>(rd.integer(s, key, v));
        else rd.fail(s, key, "unknown field");
    }
    try {
        p.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("[system]: ") + e.what());
    }
}

RunMode parse_mode(const std::string& v, const Reader& rd, const std::string& s,
                   const std::string& k)
{
    if (v == "analytic") return RunMode::analytic;
    if (v == "sim") return RunMode::sim;
    if (v == "both") return RunMode::both;
    rd.fail(s, k, "expected analytic, sim or both, got '" + v + "'");
}

void read_sim(const pt::ptree& sec, const Reader& rd, ExperimentConfig& c)
{
    const std::string s = "sim";
    for (const auto& [key, node] : sec) {
        const std::string v = field(node.data());
        if (key == "trials") c.sim.trials = rd.integer(s, key, v);
        else if (key == "seed") {
            const long x = rd.integer(s, key, v);
            if (x < 0)
                rd.fail(s, key, "seed must be nonnegative");
            c.sim.seed = static_cast<std::uint64_t>(x);
        }
        else if (key == "window_radius") c.sim.window_radius = rd.number(s, key, v);
        else if (key == "min_link_distance") c.sim.min_link_distance = rd.number(s, key, v);
        else if (key == "threads") c.sim.threads = static_cast<int>(rd.integer(s, key, v));
        else if (key == "assist") c.sim.assist = rd.boolean(s, key, v);
        else if (key == "window_guard") c.sim.enforce_window_guard = rd.boolean(s, key, v);
        else if (key == "mode") c.mode = parse_mode(v, rd, s, key);
        else if (key == "mobility") {
            if (v == "static") c.sim.mobility = Mobility::static_nodes;
            else if (v == "high") c.sim.mobility = Mobility::high;
            else rd.fail(s, key, "expected static or high, got '" + v + "'");
        }
        else rd.fail(s, key, "unknown field");
    }
}

SweepParam parse_param(const std::string& v, const Reader& rd, const std::string& k)
{
    for (auto p : {SweepParam::threshold, SweepParam::distance, SweepParam::tau_m,
                   SweepParam::cluster_radius, SweepParam::alpha, SweepParam::lambda_m})
        if (v == to_string(p))
            return p;
    rd.fail("sweep", k, "unknown sweep parameter '" + v + "'");
}

void read_sweep(const pt::ptree& sec, const Reader& rd, ExperimentConfig& c)
{
    const std::string s = "sweep";
    std::optional<SweepParam> param;
    std::optional<std::vector<double>> values;
    std::optional<double> start, stop, step;
    std::optional<bool> db;
    auto note_db = [&](const std::string& key, bool is_db) {
        if (db && *db != is_db)
            rd.fail(s, key, "mixes dB and linear sweep keys");
        db = is_db;
    };
    for (const auto& [key, node] : sec) {
        const std::string v = field(node.data());
        const Unit u = split_unit(key);
        if (u.kind == Unit::dbm)
            rd.fail(s, key, "dBm is not a sweep unit");
        const bool is_db = u.kind == Unit::db;
        if (key == "param") param = parse_param(v, rd, key);
        else if (u.base == "values") { note_db(key, is_db); values = rd.numbers(s, key, v); }
        else if (u.base == "start") { note_db(key, is_db); start = rd.number(s, key, v); }
        else if (u.base == "stop") { note_db(key, is_db); stop = rd.number(s, key, v); }
        else if (u.base == "step") { note_db(key, is_db); step = rd.number(s, key, v); }
        else if (key == "distances") c.distances = rd.numbers(s, key, v);
        else if (key == "radii") c.radii = rd.numbers(s, key, v);
        else if (key == "alphas") c.alphas = rd.numbers(s, key, v);
        else if (key == "taus") {
            c.taus.clear();
            for (const auto& item : rd.list(v))
                c.taus.push_back(static_cast<int>(rd.integer(s, key, item)));
            if (c.taus.empty())
                rd.fail(s, key, "empty list");
        }
        else if (key == "variants") {
            c.variants.clear();
            for (const auto& item : rd.list(v)) {
                if (item == "static") c.variants.push_back(Variant::static_nodes);
                else if (item == "mobile") c.variants.push_back(Variant::mobile);
                else if (item == "assisted") c.variants.push_back(Variant::assisted);
                else rd.fail(s, key, "unknown variant '" + item + "'");
            }
        }
        else if (key == "bonferroni") c.bonferroni = rd.boolean(s, key, v);
        else rd.fail(s, key, "unknown field");
    }
    const bool ranged = start || stop || step;
    if (!param) {
        if (values || ranged)
            rd.fail(s, "param", "values given without a sweep parameter");
        return;
    }
    SweepSpec spec;
    spec.param = *param;
    spec.db = db.value_or(false);
    if (spec.db && spec.param != SweepParam::threshold)
        rd.fail(s, "param", "dB values apply to the threshold only");
    if (values && ranged)
        rd.fail(s, "values", "give either values or start/stop/step");
    if (values)
        spec.values = *values;
    else if (start && stop && step) {
        if (!(*step > 0.0) || *stop < *start)
            rd.fail(s, "step", "need step > 0 and stop >= start");
        const long n = static_cast<long>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
        if (n > 100000)
            rd.fail(s, "step", "more than 100000 sweep points");
        for (long i = 0; i < n; ++i)
            spec.values.push_back(*start + i * *step);
    } else
        rd.fail(s, "param", "needs values or all of start, stop and step");
    spec.written = spec.values;
    if (spec.db)
        for (auto& x : spec.values)
            x = db_to_linear(x);
    if (spec.param == SweepParam::tau_m)
        for (double x : spec.values)
            if (x < 1 || x != std::floor(x))
                rd.fail(s, "values", "tau_m values must be positive integers");
    c.sweep = spec;
}

void read_output(const pt::ptree& sec, const Reader& rd, ExperimentConfig& c)
{
    for (const auto& [key, node] : sec) {
        const std::string v = field(node.data());
        if (key == "path") c.output_path = v;
        else if (key == "plot") c.plot_path = v;
        else rd.fail("output", key, "unknown field");
    }
}

void read_optimize(const pt::ptree& sec, const Reader& rd, ExperimentConfig& c)
{
    const std::string s = "optimize";
    auto& o = c.optimize;
    for (const auto& [key, node] : sec) {
        const std::string v = field(node.data());
        if (key == "realizations") o.realizations = static_cast<int>(rd.integer(s, key, v));
        else if (key == "bin_width") o.bin_width = rd.number(s, key, v);
        else if (key == "extent") o.extent = rd.number(s, key, v);
        else if (key == "histogram_extent") o.histogram_extent = rd.number(s, key, v);
        else if (key == "margin") o.margin = rd.number(s, key, v);
        else if (key == "fixture") o.fixture = v;
        else rd.fail(s, key, "unknown field");
    }
    if (o.realizations < 1) rd.fail(s, "realizations", "must be at least 1");
    if (!(o.bin_width > 0.0)) rd.fail(s, "bin_width", "must be positive");
    if (!(o.extent > 0.0)) rd.fail(s, "extent", "must be positive");
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source)
{
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    pt::ptree tree;
    try {
        std::istringstream src(text);
        pt::read_ini(src, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const Reader rd(source, key_lines(text));
    ExperimentConfig c;
    for (const auto& [name, sec] : tree) {
        if (sec.empty() && !sec.data().empty())
            throw ConfigError(source + ": key '" + name + "' outside a section");
        if (name == "system") read_system(sec, rd, c.system);
        else if (name == "sim") read_sim(sec, rd, c);
        else if (name == "sweep") read_sweep(sec, rd, c);
        else if (name == "output") read_output(sec, rd, c);
        else if (name == "optimize") read_optimize(sec, rd, c);
        else throw ConfigError(source + ": unknown section [" + name + "]");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    return parse_config(in, path);
}

void ResultTable::add(ResultRow row)
{
    auto plain = [](const std::string& s) {
        return s.find_first_of(",\n\r") == std::string::npos && !s.empty();
    };
    if (!plain(row.metric) || !plain(row.sweep_param))
        throw ConfigError("result row names must be nonempty and free of commas");
    if (!row.analytic && !row.simulated)
        throw ConfigError("result row " + row.metric + " has neither value");
    rows.push_back(std::move(row));
}

void ResultTable::add_meta(std::string key, std::string value)
{
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
        throw ConfigError("metadata must be single-line key=value");
    metadata.emplace_back(std::move(key), std::move(value));
}

std::vector<ResultRow> ResultTable::series(const std::string& metric) const
{
    std::vector<ResultRow> out;
    for (const auto& r : rows)
        if (r.metric == metric)
            out.push_back(r);
    return out;
}

namespace {

constexpr const char* kHeader = "sweep_param,sweep_value,metric,analytic,simulated,stderr,trials";

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

double parse_double(const std::string& s, int line)
{
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return x;
}

} // namespace

void write_csv(std::ostream& out, const ResultTable& table)
{
    for (const auto& [k, v] : table.metadata)
        out << '#' << k << '=' << v << '\n';
    out << kHeader << '\n';
    for (const auto& r : table.rows)
        out << r.sweep_param << ',' << fmt(r.sweep_value) << ',' << r.metric << ','
            << fmt(r.analytic) << ',' << fmt(r.simulated) << ',' << fmt(r.stderr_value) << ','
            << r.trials << '\n';
}

ResultTable read_csv(std::istream& in)
{
    ResultTable t;
    std::string line;
    int n = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++n;
        if (!header && !line.empty() && line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("csv line " + std::to_string(n) + ": metadata without '='");
            t.metadata.emplace_back(line.substr(1, eq - 1), line.substr(eq + 1));
            continue;
        }
        if (!header) {
            if (line != kHeader)
                throw ConfigError("csv line " + std::to_string(n) + ": unexpected header");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (true) {
            const auto c = line.find(',', pos);
            f.push_back(line.substr(pos, c - pos));
            if (c == std::string::npos)
                break;
            pos = c + 1;
        }
        if (f.size() != 7)
            throw ConfigError("csv line " + std::to_string(n) + ": expected 7 fields");
        auto opt = [&](const std::string& s) -> std::optional<double> {
            if (s.empty())
                return std::nullopt;
            return parse_double(s, n);
        };
        ResultRow r;
        r.sweep_param = f[0];
        r.sweep_value = parse_double(f[1], n);
        r.metric = f[2];
        r.analytic = opt(f[3]);
        r.simulated = opt(f[4]);
        r.stderr_value = opt(f[5]);
        r.trials = static_cast<long>(parse_double(f[6], n));
        t.rows.push_back(std::move(r));
    }
    if (!header)
        throw ConfigError("csv: missing header");
    return t;
}

void stamp_metadata(ResultTable& table, const ExperimentConfig& config)
{
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", params_hash(config.system));
    table.add_meta("version", version());
    table.add_meta("seed", std::to_string(config.sim.seed));
    table.add_meta("params_hash", hash);
    table.add_meta("mode", to_string(config.mode));
    if (config.wants_sim())
        table.add_meta("trials", std::to_string(config.sim.trials));
    for (const auto& note : config.notes)
        table.add_meta("note", note);
}

} // namespace mcd2d
