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


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mcd2d/error.hpp"
#include "mcd2d/experiment.hpp"

namespace mcd2d {

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::optional<int> threads;
    std::string out;
    std::string mode;
    std::string figure;
    std::string fixture;
};

ExperimentConfig resolve(const Flags& f)
{
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (f.seed)
        c.sim.seed = *f.seed;
    if (f.trials)
        c.sim.trials = *f.trials;
    if (f.threads)
        c.sim.threads = *f.threads;
    if (!f.mode.empty()) {
        if (f.mode == "analytic") c.mode = RunMode::analytic;
        else if (f.mode == "sim") c.mode = RunMode::sim;
        else if (f.mode == "both") c.mode = RunMode::both;
        else throw ConfigError("--mode expects analytic, sim or both");
    }
    if (!f.out.empty())
        c.output_path = f.out;
    if (!f.fixture.empty())
        c.optimize.fixture = f.fixture;
    return c;
}

void emit(const ResultTable& t, const std::string& path)
{
    if (path.empty() || path == "-") {
        write_csv(std::cout, t);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path);
    write_csv(out, t);
    if (!out)
        throw Error("write failed for " + path);
}

void report_optima(const ResultTable& t, std::ostream& os)
{
    for (const auto& r : t.rows)
        if (r.sweep_param == "alpha" && r.analytic)
            os << r.metric << " alpha=" << r.sweep_value << ": " << *r.analytic << '\n';
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"Multicast D2D coverage, throughput and assistance scheduling"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "INI experiment config")->check(CLI::ExistingFile);
    app.add_option("--seed", f.seed, "master RNG seed");
    app.add_option("--trials", f.trials, "Monte Carlo trials per point");
    app.add_option("--threads", f.threads, "worker threads (0 = all cores)");
    app.add_option("--out", f.out, "CSV output path ('-' for stdout)");
    app.add_option("--mode", f.mode, "analytic, sim or both")
        ->check(CLI::IsMember({"analytic", "sim", "both"}));

    auto* coverage = app.add_subcommand("coverage", "coverage probability sweeps");
    auto* mean = app.add_subcommand("mean-covered", "mean number of covered receivers vs tau_m");
    auto* thr = app.add_subcommand("throughput", "throughput vs threshold, tradeoff, optimal rate");
    auto* opt = app.add_subcommand("optimize", "assistance scheduling and policy statistics");
    opt->add_option("--fixture", f.fixture, "solve the cells of this fixture file");
    auto* rep = app.add_subcommand("reproduce", "one figure: CSV plus a gnuplot script");
    rep->add_option("figure", f.figure, "fig2 .. fig8")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
    }

    try {
        const ExperimentConfig c = resolve(f);
        if (coverage->parsed())
            emit(cmd_coverage(c), c.output_path);
        else if (mean->parsed())
            emit(cmd_mean_covered(c), c.output_path);
        else if (thr->parsed()) {
            const auto t = cmd_throughput(c);
            emit(t, c.output_path);
            report_optima(t, c.output_path.empty() || c.output_path == "-" ? std::cerr : std::cout);
        } else if (opt->parsed()) {
            bool infeasible = false;
            emit(cmd_optimize(c, &infeasible), c.output_path);
            if (infeasible) {
                std::cerr << "mcd2d: at least one cell misses its reliability target\n";
                return static_cast<int>(ExitCode::infeasible);
            }
        } else if (rep->parsed()) {
            const Figure fig = parse_figure(f.figure);
            const std::string csv = c.output_path.empty() ? std::string(to_string(fig)) + ".csv"
                                                          : c.output_path;
            const auto t = cmd_reproduce(fig, c);
            emit(t, csv);
            std::string plot = c.plot_path;
            if (plot.empty()) {
                plot = csv == "-" ? std::string(to_string(fig)) + ".gp"
                                  : std::filesystem::path(csv).replace_extension(".gp").string();
            }
            const std::string csv_name =
                csv == "-" ? std::string(to_string(fig)) + ".csv"
                           : std::filesystem::path(csv).filename().string();
            std::ofstream gp(plot, std::ios::binary);
            if (!gp)
                throw ConfigError("cannot write " + plot);
            gp << plot_script(fig, t, csv_name);
            if (fig == Figure::fig7)
                report_optima(t, csv == "-" ? std::cerr : std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "mcd2d: config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    } catch (const NumericalError& e) {
        std::cerr << "mcd2d: numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical_failure);
    } catch (const InfeasibleError& e) {
        std::cerr << "mcd2d: infeasible: " << e.what() << '\n';
        return static_cast<int>(ExitCode::infeasible);
    } catch (const std::exception& e) {
        std::cerr << "mcd2d: " << e.what() << '\n';
        return static_cast<int>(ExitCode::failure);
    }
    return static_cast<int>(ExitCode::success);
}

} // namespace mcd2d
