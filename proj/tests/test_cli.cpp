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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "exhaustive_oracle.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/experiment.hpp"
#include "mcd2d/optimizer.hpp"

using namespace mcd2d;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in, "test.ini");
}

std::string config_error(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "mcd2d_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "mcd2d");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::map<std::string, std::vector<ResultRow>> by_metric(const ResultTable& t)
{
    std::map<std::string, std::vector<ResultRow>> out;
    for (const auto& r : t.rows)
        out[r.metric].push_back(r);
    return out;
}

ExperimentConfig analytic()
{
    ExperimentConfig c;
    c.mode = RunMode::analytic;
    return c;
}

} // namespace

TEST_CASE("an empty config is the reference parameter set")
{
    const auto c = parse("");
    const auto t = SystemParams::table_one();
    const auto& p = c.system;
    CHECK(p.lambda_b == t.lambda_b);
    CHECK(p.lambda_m == t.lambda_m);
    CHECK(p.lambda_r == t.lambda_r);
    CHECK(p.alpha == t.alpha);
    CHECK(p.threshold == t.threshold);
    CHECK(p.p_bs == t.p_bs);
    CHECK(p.p_d2d == t.p_d2d);
    CHECK(p.noise_power == t.noise_power);
    CHECK(p.cluster_radius == t.cluster_radius);
    CHECK(p.tau_m == t.tau_m);
    CHECK(p.eta == t.eta);
    CHECK(p.budget == t.budget);
    CHECK(params_hash(p) == params_hash(t));
    CHECK(c.sim.seed == kDefaultSeed);
    CHECK(c.mode == RunMode::both);
    CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("dB keys convert once")
{
    const auto c = parse("[system]\nthreshold_db = 3\np_bs_dbm = 46\nnoise_power_db = -130\n"
                         "[sweep]\nparam = threshold\nstart_db = -6\nstop_db = 0\nstep_db = 2\n");
    CHECK(c.system.threshold == doctest::Approx(std::pow(10.0, 0.3)));
    CHECK(c.system.p_bs == doctest::Approx(std::pow(10.0, 1.6)));
    CHECK(c.system.noise_power == doctest::Approx(1e-13));
    REQUIRE(c.sweep);
    CHECK(c.sweep->db);
    CHECK(c.sweep->written == std::vector<double>{-6, -4, -2, 0});
    CHECK(c.sweep->values[0] == doctest::Approx(std::pow(10.0, -0.6)));
}

TEST_CASE("inline comments are stripped from values")
{
    const auto c = parse("[system]\ncluster_radius = 250 ; metres\ntau_m = 4\t# slots\n"
                         "[output]\npath = a;b.csv\n");
    CHECK(c.system.cluster_radius == 250.0);
    CHECK(c.system.tau_m == 4);
    CHECK(c.output_path == "a;b.csv");
}

TEST_CASE("full config sections")
{
    const auto c = parse("; comment\n[system]\ncluster_radius = 250\ntau_m = 4\nbudget = 3\n"
                         "[sim]\ntrials = 123\nseed = 9\nmobility = high\nassist = true\nmode = sim\n"
                         "[sweep]\nparam = distance\nvalues = 10, 20, 30\ntaus = 1,8\n"
                         "variants = static, mobile, assisted\n"
                         "[output]\npath = out.csv\n[optimize]\nrealizations = 7\nfixture = f.txt\n");
    CHECK(c.system.cluster_radius == 250.0);
    CHECK(c.system.tau_m == 4);
    CHECK(c.sim.trials == 123);
    CHECK(c.sim.seed == 9);
    CHECK(c.sim.mobility == Mobility::high);
    CHECK(c.sim.assist);
    CHECK(c.mode == RunMode::sim);
    CHECK(c.sweep->param == SweepParam::distance);
    CHECK(c.sweep->values == std::vector<double>{10, 20, 30});
    CHECK(c.taus == std::vector<int>{1, 8});
    CHECK(c.variants.size() == 3);
    CHECK(c.output_path == "out.csv");
    CHECK(c.optimize.realizations == 7);
    CHECK(c.optimize.fixture == "f.txt");
}

TEST_CASE("config diagnostics name the line and field")
{
    auto msg = config_error("[system]\nalpha = 3\nbogus = 1\n");
    CHECK(msg.find("test.ini:3") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
    msg = config_error("[system]\n\nalpha = three\n");
    CHECK(msg.find("test.ini:3") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(config_error("[nowhere]\nx = 1\n").find("nowhere") != std::string::npos);
    CHECK(config_error("[sweep]\nparam = colour\nvalues = 1\n").find("colour") != std::string::npos);
    CHECK(config_error("[sweep]\nparam = distance\nvalues_db = 1\n").find("dB") != std::string::npos);
    CHECK(config_error("[system]\nalpha_db = 3\n").find("alpha_db") != std::string::npos);
    CHECK(config_error("[system]\nalpha = 1.5\n").find("system") != std::string::npos);
    CHECK(config_error("[sim]\nmode = fast\n").find("mode") != std::string::npos);
    CHECK(config_error("[system]\nalpha = 3\nalpha = 4\n").find("test.ini:3") != std::string::npos);
    CHECK(config_error("[sweep]\nparam = tau_m\nvalues = 1.5\n").find("tau_m") != std::string::npos);
}

TEST_CASE("CSV round trip is lossless")
{
    ResultTable t;
    t.add_meta("seed", "42");
    t.add_meta("note", "a b c");
    ResultRow a{"threshold_db", -3.0, "m1", 0.1 + 0.2, std::nullopt, std::nullopt, 0};
    ResultRow b{"distance", 1.0 / 3.0, "m2", std::nullopt, 0.7, 1e-300, 100000};
    ResultRow c{"tau_m", 2.0, "m3", std::nextafter(1.0, 2.0), 5e-324, 0.0, 7};
    t.add(a);
    t.add(b);
    t.add(c);
    std::stringstream s;
    write_csv(s, t);
    const auto back = read_csv(s);
    CHECK(back.metadata == t.metadata);
    CHECK(back.rows == t.rows);
    CHECK_THROWS_AS(t.add({"x", 0, "m", std::nullopt, std::nullopt, std::nullopt, 0}), ConfigError);
    CHECK_THROWS_AS(t.add({"x", 0, "a,b", 1.0, std::nullopt, std::nullopt, 0}), ConfigError);

    const auto cov = cmd_coverage(analytic());
    std::stringstream s2;
    write_csv(s2, cov);
    CHECK(read_csv(s2).rows == cov.rows);
}

TEST_CASE("coverage curves fall with threshold and distance, rise with repetitions")
{
    const auto m = by_metric(cmd_coverage(analytic()));
    for (const auto& [name, rows] : m) {
        REQUIRE(rows.size() == 19);
        CHECK(rows.front().sweep_value == -6.0);
        CHECK(rows.back().sweep_value == 12.0);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(*rows[i].analytic < *rows[i - 1].analytic);
    }
    for (std::size_t i = 0; i < 19; ++i) {
        for (const char* tau : {"1", "2", "4"}) {
            const auto t = std::string("_tau") + tau;
            CHECK(*m.at("coverage_d50" + t)[i].analytic > *m.at("coverage_d150" + t)[i].analytic);
            CHECK(*m.at("coverage_d150" + t)[i].analytic > *m.at("coverage_d250" + t)[i].analytic);
        }
        CHECK(*m.at("coverage_d250_tau4")[i].analytic >= *m.at("coverage_d250_tau1")[i].analytic);
    }
}

TEST_CASE("Bonferroni columns bracket the coverage")
{
    auto c = analytic();
    c.bonferroni = true;
    c.taus = {4};
    c.distances = {150.0};
    const auto m = by_metric(cmd_coverage(c));
    const auto& p = m.at("coverage_d150_tau4");
    const auto& lo = m.at("bonferroni_lower_k3_d150_tau4");
    const auto& hi = m.at("bonferroni_upper_k1_d150_tau4");
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(*lo[i].analytic <= *p[i].analytic + 1e-14);
        CHECK(*p[i].analytic <= *hi[i].analytic);
    }
}

TEST_CASE("mean covered curves")
{
    auto c = analytic();
    c.variants = {Variant::static_nodes, Variant::mobile, Variant::assisted};
    const auto m = by_metric(cmd_mean_covered(c));
    for (double r : {50.0, 150.0, 250.0}) {
        char key[64];
        std::snprintf(key, sizeof key, "normalized_mean_R%g", r);
        const auto& s = m.at(key);
        const auto& a = m.at(std::string(key) + "_assisted");
        REQUIRE(s.size() == 10);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(*s[i].analytic > 0.0);
            CHECK(*s[i].analytic <= 1.0);
            CHECK(*a[i].analytic >= *s[i].analytic);
            if (i >= 2)
                CHECK(*s[i].analytic - *s[i - 1].analytic < *s[i - 1].analytic - *s[i - 2].analytic);
        }
    }
}

TEST_CASE("throughput curves and optimal rates")
{
    const auto t = cmd_throughput(analytic());
    const auto m = by_metric(t);
    for (const auto& [name, rows] : m) {
        if (name.rfind("throughput_alpha", 0) != 0 || rows.front().sweep_param != "threshold_db")
            continue;
        std::size_t peak = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (*rows[i].analytic > *rows[peak].analytic)
                peak = i;
        CHECK(peak > 0);
        CHECK(peak + 1 < rows.size());
        for (std::size_t i = 1; i <= peak; ++i)
            CHECK(*rows[i].analytic > *rows[i - 1].analytic);
        for (std::size_t i = peak + 1; i < rows.size(); ++i)
            CHECK(*rows[i].analytic < *rows[i - 1].analytic);
    }
    const auto& xi = m.at("throughput_alpha3.5");
    for (std::size_t i = 1; i < xi.size(); ++i)
        CHECK(*xi[i].analytic < *xi[i - 1].analytic);
    const auto& opt = m.at("optimal_threshold_asymptotic_db");
    CHECK(opt.size() == 3);
    CHECK(m.count("optimal_threshold_db_tau1"));
    CHECK(m.count("tradeoff_alpha3.5"));
}

TEST_CASE("optimize on a fixture agrees with exhaustive search and respects the budget")
{
    const auto model = std::make_shared<const AssistModel>(SystemParams::table_one());
    std::vector<CellInstance> cells{
        {{40.0, 90.0, 230.0}, 2, 0.95, model},
        {{120.0, 300.0, 310.0, 700.0, 800.0}, 1, 0.97, model},
        {{10.0}, 0, 0.9, model},
        {{}, 2, 0.95, model},
    };
    const auto path = scratch("cells.txt");
    {
        std::ofstream out(path);
        write_cells(out, cells);
    }
    auto c = analytic();
    c.optimize.fixture = path.string();
    bool infeasible = true;
    const auto m = by_metric(cmd_optimize(c, &infeasible));
    CHECK_FALSE(infeasible);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto o = testing::exhaustive_solve(cells[i]);
        CHECK(*m.at("tau_star")[i].analytic == o.tau);
        CHECK(*m.at("assisted_count")[i].analytic == o.assisted);
        CHECK(*m.at("assisted_count")[i].analytic <= cells[i].budget);
    }

    cells = {{{900.0, 950.0}, 0, 0.9999999, model}};
    {
        std::ofstream out(path);
        write_cells(out, cells);
    }
    CHECK(cli({"optimize", "--fixture", path.string(), "--out", scratch("o.csv").string()}) == 4);
}

TEST_CASE("exit codes")
{
    const auto bad = scratch("bad.ini");
    {
        std::ofstream out(bad);
        out << "[system]\nalpha = x\n";
    }
    CHECK(cli({"coverage", "--config", bad.string()}) == 2);
    CHECK(cli({"no-such-command"}) == 2);
    CHECK(cli({"reproduce", "fig9", "--mode", "analytic", "--out", scratch("x.csv").string()}) == 2);
    CHECK(cli({"coverage", "--mode", "fast"}) == 2);
    CHECK(cli({"--version"}) == 0);

    const auto deep = scratch("deep.ini");
    {
        std::ofstream out(deep);
        out << "[sweep]\ntaus = 64\n";
    }
    CHECK(cli({"coverage", "--config", deep.string(), "--mode", "analytic", "--out",
               scratch("deep.csv").string()}) == 3);
    CHECK(cli({"coverage", "--mode", "analytic", "--out", scratch("ok.csv").string()}) == 0);
    CHECK(read_csv(*std::make_unique<std::ifstream>(scratch("ok.csv"))).rows.size() == 171);
}

TEST_CASE("reproduce writes CSV and plot script, bit-exact under a fixed seed")
{
    const auto a = scratch("a/fig2.csv"), b = scratch("b/fig2.csv");
    fs::create_directories(a.parent_path());
    fs::create_directories(b.parent_path());
    for (const auto& p : {a, b})
        REQUIRE(cli({"reproduce", "fig2", "--trials", "600", "--seed", "5", "--out", p.string()}) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(a.parent_path() / "fig2.gp"));
    CHECK(slurp(a.parent_path() / "fig2.gp").find("'fig2.csv'") != std::string::npos);

    std::ifstream in(a);
    const auto t = read_csv(in);
    std::set<std::string> distances;
    for (const auto& r : t.rows) {
        REQUIRE(r.analytic);
        REQUIRE(r.simulated);
        CHECK(std::abs(*r.analytic - *r.simulated) <= 4.0 * *r.stderr_value + 0.01);
        distances.insert(r.metric.substr(0, r.metric.find("_tau")));
    }
    CHECK(distances.size() == 3);
    CHECK(t.metadata.front() == std::pair<std::string, std::string>{"figure", "fig2"});
}

TEST_CASE("figure six runs the optimizer pipeline")
{
    ExperimentConfig base;
    base.optimize.realizations = 5;
    const auto t = cmd_reproduce(Figure::fig6, base);
    const auto m = by_metric(t);
    CHECK(m.at("assist_frequency").size() > 5);
    CHECK(m.count("tau_bar"));
    CHECK(*m.at("infeasible_cells")[0].simulated == 0.0);
    CHECK(plot_script(Figure::fig6, t, "fig6.csv").find("with boxes") != std::string::npos);
}
