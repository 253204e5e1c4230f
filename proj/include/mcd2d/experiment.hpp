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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcd2d/coverage.hpp"
#include "mcd2d/params.hpp"
#include "mcd2d/simulator.hpp"

namespace mcd2d {

/// Build identifier (git describe at configure time).
const char* version();

inline constexpr std::uint64_t kDefaultSeed = 20140811;

enum class RunMode { analytic, sim, both };

enum class SweepParam { threshold, distance, tau_m, cluster_radius, alpha, lambda_m };

const char* to_string(SweepParam p);
const char* to_string(RunMode m);

struct SweepSpec {
    SweepParam param = SweepParam::threshold;
    std::vector<double> values;  ///< linear scale
    std::vector<double> written; ///< as given in the config (dB when db is set)
    bool db = false;
};

/// One curve variant of the mean-covered figures.
enum class Variant { static_nodes, mobile, assisted };

struct OptimizeSpec {
    int realizations = 50;
    double bin_width = 25.0;
    double extent = 5000.0;           ///< BSs inside B(0, extent) contribute cells
    double histogram_extent = 1000.0; ///< last finite histogram edge
    double margin = 1000.0;
    std::string fixture;              ///< solve these cells instead of sampling
};

struct ExperimentConfig {
    SystemParams system = SystemParams::table_one();
    SimConfig sim = default_sim();
    RunMode mode = RunMode::both;
    std::optional<SweepSpec> sweep;
    std::vector<double> distances{50.0, 150.0, 250.0};
    std::vector<int> taus{1, 2, 4};
    std::vector<double> radii{50.0, 150.0, 250.0};
    std::vector<double> alphas{3.0, 3.5, 4.0};
    std::vector<Variant> variants{Variant::static_nodes};
    bool bonferroni = false;
    std::string output_path;
    std::string plot_path;
    OptimizeSpec optimize;
    std::vector<std::string> notes; ///< copied into the CSV preamble

    static SimConfig default_sim();
    bool wants_analytic() const { return mode != RunMode::sim; }
    bool wants_sim() const { return mode != RunMode::analytic; }
};

/// INI-style text with [system], [sim], [sweep], [output] and [optimize] sections.
/// Keys ending in _db (or _dbm for powers) are converted to linear once here.
/// Throws ConfigError naming the line and the field.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string metric;
    std::optional<double> analytic;
    std::optional<double> simulated;
    std::optional<double> stderr_value;
    long trials = 0;

    bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<ResultRow> rows;

    void add(ResultRow row);
    void add_meta(std::string key, std::string value);
    /// Rows with this metric, in insertion order.
    std::vector<ResultRow> series(const std::string& metric) const;
};

/// "#key=value" preamble, one header line, then rows; numbers printed with %.17g.
void write_csv(std::ostream& out, const ResultTable& table);
ResultTable read_csv(std::istream& in);

/// Seed, version, params hash, trials and mode, prepended by every command.
void stamp_metadata(ResultTable& table, const ExperimentConfig& config);

ResultTable cmd_coverage(const ExperimentConfig& config);
ResultTable cmd_mean_covered(const ExperimentConfig& config);
ResultTable cmd_throughput(const ExperimentConfig& config);
/// `infeasible` is set when a fixture cell cannot meet its target.
ResultTable cmd_optimize(const ExperimentConfig& config, bool* infeasible = nullptr);

enum class Figure { fig2, fig3, fig4, fig5, fig6, fig7, fig8 };

Figure parse_figure(const std::string& id);
const char* to_string(Figure f);

/// Figure defaults layered over `base` (system block, seed, trials, threads, mode).
ExperimentConfig figure_config(Figure f, const ExperimentConfig& base);
ResultTable cmd_reproduce(Figure f, const ExperimentConfig& base);

/// gnuplot command file plotting `csv_name` (analytic lines, simulated error bars).
std::string plot_script(Figure f, const ResultTable& table, const std::string& csv_name);

/// Full command line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv);

} // namespace mcd2d
