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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "mcd2d/assistance.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/experiment.hpp"
#include "mcd2d/mean_covered.hpp"
#include "mcd2d/optimizer.hpp"

namespace mcd2d {

namespace {

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

SystemParams with_tau(SystemParams p, int tau)
{
    p.tau_m = tau;
    return p;
}

int max_tau(const std::vector<int>& taus)
{
    if (taus.empty())
        throw ConfigError("at least one tau_m value is required");
    for (int t : taus)
        if (t < 1)
            throw ConfigError("tau_m values must be positive");
    return *std::max_element(taus.begin(), taus.end());
}

std::vector<int> as_taus(const std::vector<double>& v)
{
    std::vector<int> out;
    for (double x : v)
        out.push_back(static_cast<int>(x));
    return out;
}

/// Sweep axis: linear values plus the label and value written to the CSV.
struct Axis {
    std::string label;
    std::vector<double> values;
    std::vector<double> shown;
};

Axis threshold_axis(const ExperimentConfig& c, double lo_db, double hi_db)
{
    SweepSpec s;
    if (c.sweep && c.sweep->param == SweepParam::threshold)
        s = *c.sweep;
    else {
        s.db = true;
        for (int i = 0; lo_db + i <= hi_db; ++i) {
            s.written.push_back(lo_db + i);
            s.values.push_back(db_to_linear(lo_db + i));
        }
    }
    return {s.db ? "threshold_db" : "threshold", s.values,
            s.written.size() == s.values.size() ? s.written : s.values};
}

ResultRow row(const std::string& param, double x, const std::string& metric)
{
    ResultRow r;
    r.sweep_param = param;
    r.sweep_value = x;
    r.metric = metric;
    return r;
}

void put_sim(ResultRow& r, const CoverageEstimate& e, double scale = 1.0)
{
    r.simulated = e.estimate * scale;
    r.stderr_value = e.std_error * scale;
    r.trials = e.trials;
}

double point_coverage(double d, const SystemParams& p, const ExperimentConfig& c)
{
    return c.sim.assist ? assisted_coverage(d, p) : coverage_probability(d, p, c.sim.mobility);
}

void coverage_vs_threshold(const ExperimentConfig& c, ResultTable& t)
{
    const Axis ax = threshold_axis(c, -6.0, 12.0);
    const int tmax = max_tau(c.taus);
    const std::string suffix = c.sim.assist ? "_assisted" : "";
    for (double d : c.distances) {
        CoverageSweep sim;
        if (c.wants_sim())
            sim = estimate_coverage_sweep(d, ax.values, with_tau(c.system, tmax), c.sim);
        for (int tau : c.taus) {
            const std::string metric = "coverage_d" + num(d) + "_tau" + std::to_string(tau) + suffix;
            for (std::size_t i = 0; i < ax.values.size(); ++i) {
                auto p = with_tau(c.system, tau);
                p.threshold = ax.values[i];
                auto r = row(ax.label, ax.shown[i], metric);
                if (c.wants_analytic())
                    r.analytic = point_coverage(d, p, c);
                if (c.wants_sim())
                    put_sim(r, sim.at(i, tau));
                t.add(r);
            }
            if (!c.bonferroni || !c.wants_analytic())
                continue;
            for (int k = 1; k < tau; k += 2)
                for (std::size_t i = 0; i < ax.values.size(); ++i) {
                    auto p = with_tau(c.system, tau);
                    p.threshold = ax.values[i];
                    const auto b = bonferroni_bounds(d, p, k, c.sim.mobility);
                    const std::string tag = "_k" + std::to_string(k) + "_d" + num(d) + "_tau" +
                                            std::to_string(tau);
                    auto lo = row(ax.label, ax.shown[i], "bonferroni_lower" + tag);
                    lo.analytic = b.lower;
                    t.add(lo);
                    auto hi = row(ax.label, ax.shown[i], "bonferroni_upper" + tag);
                    hi.analytic = b.upper;
                    t.add(hi);
                }
        }
    }
}

void coverage_vs_distance(const ExperimentConfig& c, ResultTable& t)
{
    const auto& ds = c.sweep->values;
    const int tmax = max_tau(c.taus);
    std::vector<CoverageSweep> sim;
    if (c.wants_sim())
        for (double d : ds)
            sim.push_back(estimate_coverage_sweep(d, {c.system.threshold}, with_tau(c.system, tmax), c.sim));
    const std::string suffix = c.sim.assist ? "_assisted" : "";
    for (int tau : c.taus)
        for (std::size_t i = 0; i < ds.size(); ++i) {
            auto r = row("distance", ds[i], "coverage_tau" + std::to_string(tau) + suffix);
            if (c.wants_analytic())
                r.analytic = point_coverage(ds[i], with_tau(c.system, tau), c);
            if (c.wants_sim())
                put_sim(r, sim[i].at(0, tau));
            t.add(r);
        }
}

const char* variant_suffix(Variant v)
{
    switch (v) {
    case Variant::mobile: return "_mobile";
    case Variant::assisted: return "_assisted";
    default: return "";
    }
}

std::vector<int> tau_axis(const ExperimentConfig& c, int default_max)
{
    if (c.sweep) {
        if (c.sweep->param != SweepParam::tau_m)
            throw ConfigError("[sweep] param must be tau_m for this command");
        return as_taus(c.sweep->values);
    }
    std::vector<int> out;
    for (int t = 1; t <= default_max; ++t)
        out.push_back(t);
    return out;
}

void throughput_vs_threshold(const ExperimentConfig& c, ResultTable& t)
{
    const Axis ax = threshold_axis(c, -10.0, 20.0);
    const int tmax = max_tau(c.taus);
    for (double alpha : c.alphas) {
        auto base = c.system;
        base.alpha = alpha;
        CoverageSweep sim;
        if (c.wants_sim())
            sim = estimate_mean_covered_sweep(ax.values, with_tau(base, tmax), c.sim);
        for (int tau : c.taus) {
            const std::string metric = "throughput_alpha" + num(alpha) + "_tau" + std::to_string(tau);
            for (std::size_t i = 0; i < ax.values.size(); ++i) {
                auto p = with_tau(base, tau);
                p.threshold = ax.values[i];
                auto r = row(ax.label, ax.shown[i], metric);
                if (c.wants_analytic())
                    r.analytic = throughput(p, c.sim.mobility);
                if (c.wants_sim())
                    put_sim(r, sim.at(i, tau), std::log1p(ax.values[i]) / tau);
                t.add(r);
            }
        }
    }
}

void tradeoff_curves(const ExperimentConfig& c, ResultTable& t)
{
    const auto taus = tau_axis(c, 10);
    const int tmax = max_tau(taus);
    for (double alpha : c.alphas) {
        auto base = c.system;
        base.alpha = alpha;
        const double n_max = base.n_max();
        const double rate = std::log1p(base.threshold);
        CoverageSweep sim;
        if (c.wants_sim())
            sim = estimate_mean_covered_sweep({base.threshold}, with_tau(base, tmax), c.sim);
        const std::string a = "_alpha" + num(alpha);
        for (int tau : taus) {
            const auto p = with_tau(base, tau);
            auto xi = row("tau_m", tau, "throughput" + a);
            auto mn = row("tau_m", tau, "normalized_mean" + a);
            if (c.wants_analytic()) {
                xi.analytic = throughput(p, c.sim.mobility);
                mn.analytic = mean_covered(p, c.sim.mobility) / n_max;
            }
            if (c.wants_sim()) {
                put_sim(xi, sim.at(0, tau), rate / tau);
                put_sim(mn, sim.at(0, tau), 1.0 / n_max);
            }
            t.add(xi);
            t.add(mn);
        }
        if (!c.wants_analytic())
            continue;
        for (int tau : taus) {
            const auto p = with_tau(base, tau);
            auto locus = row("throughput", throughput(p, c.sim.mobility), "tradeoff" + a);
            locus.analytic = mean_covered(p, c.sim.mobility) / n_max;
            t.add(locus);
        }
    }
}

void optimal_rates(const ExperimentConfig& c, ResultTable& t)
{
    for (double alpha : c.alphas) {
        auto r = row("alpha", alpha, "optimal_threshold_asymptotic_db");
        r.analytic = linear_to_db(optimal_rate_asymptotic(alpha));
        t.add(r);
        for (int tau : c.taus) {
            auto p = with_tau(c.system, tau);
            p.alpha = alpha;
            const auto opt = optimal_rate_general(p);
            auto th = row("alpha", alpha, "optimal_threshold_db_tau" + std::to_string(tau));
            th.analytic = linear_to_db(opt.threshold);
            t.add(th);
            auto xi = row("alpha", alpha, "optimal_throughput_tau" + std::to_string(tau));
            xi.analytic = opt.throughput;
            t.add(xi);
        }
    }
}

} // namespace

ResultTable cmd_coverage(const ExperimentConfig& c)
{
    ResultTable t;
    stamp_metadata(t, c);
    if (!c.sweep || c.sweep->param == SweepParam::threshold)
        coverage_vs_threshold(c, t);
    else if (c.sweep->param == SweepParam::distance)
        coverage_vs_distance(c, t);
    else
        throw ConfigError("coverage sweeps threshold or distance, not " +
                          std::string(to_string(c.sweep->param)));
    return t;
}

ResultTable cmd_mean_covered(const ExperimentConfig& c)
{
    ResultTable t;
    stamp_metadata(t, c);
    const auto taus = tau_axis(c, 10);
    const int tmax = max_tau(taus);
    if (c.variants.empty())
        throw ConfigError("[sweep] variants must not be empty");
    for (double radius : c.radii) {
        auto base = c.system;
        base.cluster_radius = radius;
        base.validate();
        const double n_max = base.n_max();
        for (Variant v : c.variants) {
            CoverageSweep sim;
            if (c.wants_sim()) {
                SimConfig s = c.sim;
                s.mobility = v == Variant::mobile ? Mobility::high : Mobility::static_nodes;
                s.assist = v == Variant::assisted;
                sim = estimate_mean_covered_sweep({base.threshold}, with_tau(base, tmax), s);
            }
            const std::string metric = "normalized_mean_R" + num(radius) + variant_suffix(v);
            for (int tau : taus) {
                const auto p = with_tau(base, tau);
                auto r = row("tau_m", tau, metric);
                if (c.wants_analytic()) {
                    double value = 0.0;
                    switch (v) {
                    case Variant::static_nodes: value = mean_covered(p); break;
                    case Variant::mobile: value = mean_covered(p, Mobility::high); break;
                    case Variant::assisted: value = assisted_mean_covered(p); break;
                    }
                    r.analytic = value / n_max;
                }
                if (c.wants_sim())
                    put_sim(r, sim.at(0, tau), 1.0 / n_max);
                t.add(r);
            }
        }
    }
    return t;
}

ResultTable cmd_throughput(const ExperimentConfig& c)
{
    ResultTable t;
    stamp_metadata(t, c);
    ExperimentConfig vs_t = c;
    if (vs_t.sweep && vs_t.sweep->param != SweepParam::threshold)
        vs_t.sweep.reset();
    throughput_vs_threshold(vs_t, t);
    ExperimentConfig vs_tau = c;
    if (vs_tau.sweep && vs_tau.sweep->param != SweepParam::tau_m)
        vs_tau.sweep.reset();
    tradeoff_curves(vs_tau, t);
    optimal_rates(c, t);
    return t;
}

ResultTable cmd_optimize(const ExperimentConfig& c, bool* infeasible)
{
    ResultTable t;
    stamp_metadata(t, c);
    const auto& o = c.optimize;
    const auto model = std::make_shared<const AssistModel>(c.system);
    bool any_infeasible = false;
    if (!o.fixture.empty()) {
        std::ifstream in(o.fixture);
        if (!in)
            throw ConfigError("cannot open cell fixture " + o.fixture);
        const auto cells = read_cells(in, model);
        t.add_meta("fixture", o.fixture);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto sol = solve_cell(cells[i]);
            any_infeasible = any_infeasible || !sol.feasible;
            const double x = static_cast<double>(i);
            auto tau = row("cell", x, "tau_star");
            tau.analytic = sol.tau_star;
            auto used = row("cell", x, "assisted_count");
            used.analytic = std::count(sol.assist.begin(), sol.assist.end(), 1);
            auto rel = row("cell", x, "reliability");
            rel.analytic = sol.achieved_reliability;
            auto feas = row("cell", x, "feasible");
            feas.analytic = sol.feasible ? 1.0 : 0.0;
            for (auto* r : {&tau, &used, &rel, &feas})
                t.add(*r);
        }
        if (infeasible)
            *infeasible = any_infeasible;
        return t;
    }
    const auto agg = aggregate_policy(model, o.realizations, o.bin_width, o.extent, c.sim.seed,
                                      c.sim.threads, o.histogram_extent, o.margin);
    const auto& h = agg.histogram;
    t.add_meta("realizations", std::to_string(o.realizations));
    PiecewiseConstantPolicy policy;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        policy.edges.push_back(h.edges[b]);
        const double f = h.frequency(b);
        policy.values.push_back(std::isnan(f) ? 0.0 : f);
        if (h.counts[b] == 0)
            continue;
        const bool tail = b + 1 == h.bins();
        auto r = row("bs_distance", tail ? h.edges[b] : 0.5 * (h.edges[b] + h.edges[b + 1]),
                     tail ? "assist_frequency_tail" : "assist_frequency");
        r.simulated = f;
        r.stderr_value = std::sqrt(f * (1.0 - f) / static_cast<double>(h.counts[b]));
        r.trials = static_cast<long>(h.counts[b]);
        t.add(r);
    }
    policy.edges.push_back(h.edges.back());
    auto summary = [&](const char* metric, double v) {
        auto r = row("summary", 0.0, metric);
        r.simulated = v;
        t.add(r);
    };
    summary("tau_bar", agg.tau_bar);
    summary("trend_spearman", histogram_trend(h));
    summary("cells", static_cast<double>(agg.cells));
    summary("empty_cells", static_cast<double>(agg.empty_cells));
    summary("infeasible_cells", static_cast<double>(agg.infeasible_cells));
    // the empirical frequencies read as a relaxed policy at the mean repetition count
    const int tau = std::max(1, static_cast<int>(std::ceil(agg.tau_bar)));
    const auto relaxed = evaluate_relaxed(policy, tau, *model);
    auto rel = [&](const char* metric, double v) {
        auto r = row("relaxed_tau", tau, metric);
        r.analytic = v;
        t.add(r);
    };
    rel("relaxed_usage", relaxed.usage);
    rel("relaxed_usage_limit", relaxed.usage_limit);
    rel("relaxed_reliability", relaxed.reliability);
    if (infeasible)
        *infeasible = false;
    return t;
}

Figure parse_figure(const std::string& id)
{
    for (auto f : {Figure::fig2, Figure::fig3, Figure::fig4, Figure::fig5, Figure::fig6,
                   Figure::fig7, Figure::fig8})
        if (id == to_string(f))
            return f;
    throw ConfigError("unknown figure '" + id + "' (expected fig2 .. fig8)");
}

const char* to_string(Figure f)
{
    switch (f) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::fig6: return "fig6";
    case Figure::fig7: return "fig7";
    case Figure::fig8: return "fig8";
    }
    return "?";
}

ExperimentConfig figure_config(Figure f, const ExperimentConfig& base)
{
    ExperimentConfig c;
    c.system = base.system;
    c.sim = base.sim;
    c.sim.assist = false;
    c.sim.mobility = Mobility::static_nodes;
    c.mode = base.mode;
    c.optimize = base.optimize;
    c.optimize.fixture.clear();
    auto db_sweep = [](double lo, double hi) {
        SweepSpec s;
        s.db = true;
        for (int i = 0; lo + i <= hi; ++i) {
            s.written.push_back(lo + i);
            s.values.push_back(db_to_linear(lo + i));
        }
        return s;
    };
    auto tau_sweep = [](int hi) {
        SweepSpec s;
        s.param = SweepParam::tau_m;
        for (int t = 1; t <= hi; ++t)
            s.values.push_back(t);
        s.written = s.values;
        return s;
    };
    switch (f) {
    case Figure::fig2:
        c.sweep = db_sweep(-6.0, 12.0);
        c.distances = {50.0, 150.0, 250.0};
        c.taus = {1, 2, 4};
        c.notes = {"coverage versus threshold at distances 50 150 250 m for tau_m 1 2 4"};
        break;
    case Figure::fig3:
    case Figure::fig4:
    case Figure::fig5:
        c.sweep = tau_sweep(10);
        c.radii = {50.0, 150.0, 250.0};
        c.variants = {Variant::static_nodes};
        if (f == Figure::fig4)
            c.variants.push_back(Variant::mobile);
        if (f == Figure::fig5)
            c.variants.push_back(Variant::assisted);
        c.notes = {"legend assumption: R in 50 150 250 m with tau_m 1..10"};
        break;
    case Figure::fig6:
        c.system.eta = 0.95;
        c.system.budget = 2;
        c.notes = {"eta 0.95 budget 2 cluster radius " + num(c.system.cluster_radius) + " m"};
        break;
    case Figure::fig7:
        c.system.cluster_radius = 150.0;
        c.sweep = db_sweep(-10.0, 20.0);
        c.alphas = {3.0, 3.5, 4.0};
        c.taus = {1, 4};
        c.notes = {"R 150 m; alpha 3 3.5 4; tau_m 1 4"};
        break;
    case Figure::fig8:
        c.system.cluster_radius = 150.0;
        c.sweep = tau_sweep(10);
        c.alphas = {3.0, 3.5, 4.0};
        c.notes = {"R 150 m; alpha 3 3.5 4; tau_m 1..10"};
        break;
    }
    return c;
}

ResultTable cmd_reproduce(Figure f, const ExperimentConfig& base)
{
    const ExperimentConfig c = figure_config(f, base);
    ResultTable t;
    switch (f) {
    case Figure::fig2: t = cmd_coverage(c); break;
    case Figure::fig3:
    case Figure::fig4:
    case Figure::fig5: t = cmd_mean_covered(c); break;
    case Figure::fig6: t = cmd_optimize(c); break;
    case Figure::fig7:
        stamp_metadata(t, c);
        throughput_vs_threshold(c, t);
        optimal_rates(c, t);
        break;
    case Figure::fig8:
        stamp_metadata(t, c);
        tradeoff_curves(c, t);
        break;
    }
    t.metadata.insert(t.metadata.begin(), {"figure", to_string(f)});
    return t;
}

std::string plot_script(Figure f, const ResultTable& table, const std::string& csv_name)
{
    std::vector<std::string> metrics;
    std::set<std::string> seen, simulated;
    std::string xlabel;
    const std::string wanted = f == Figure::fig8 ? "throughput"
                             : f == Figure::fig6 ? "bs_distance"
                                                 : "";
    for (const auto& r : table.rows) {
        if (!wanted.empty() && r.sweep_param != wanted)
            continue;
        if (r.sweep_param == "alpha" || r.sweep_param == "summary" || r.sweep_param == "relaxed_tau")
            continue;
        if (xlabel.empty())
            xlabel = r.sweep_param;
        if (seen.insert(r.metric).second)
            metrics.push_back(r.metric);
        if (r.simulated)
            simulated.insert(r.metric);
    }
    std::ostringstream g;
    g << "# gnuplot command file for " << to_string(f) << "\n"
      << "set terminal pngcairo size 800,600\n"
      << "set output '" << to_string(f) << ".png'\n"
      << "set datafile separator ','\n"
      << "set datafile columnheaders\n"
      << "set key outside right\n"
      << "set grid\n"
      << "set xlabel '" << xlabel << "'\n";
    if (f == Figure::fig6)
        g << "set ylabel 'assistance frequency'\nset style fill solid 0.5\nset boxwidth 0.9 relative\n";
    g << "plot \\\n";
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const auto& m = metrics[i];
        const std::string sel = "(strcol(3) eq '" + m + "' ? $";
        if (f == Figure::fig6)
            g << "  '" << csv_name << "' using 2:" << sel << "5 : 1/0) with boxes title '" << m << "'";
        else {
            g << "  '" << csv_name << "' using 2:" << sel << "4 : 1/0) with lines title '" << m << "'";
            if (simulated.count(m))
                g << ", \\\n  '" << csv_name << "' using 2:" << sel << "5 : 1/0):6 with yerrorbars"
                  << " notitle";
        }
        g << (i + 1 < metrics.size() ? ", \\\n" : "\n");
    }
    return g.str();
}

} // namespace mcd2d
