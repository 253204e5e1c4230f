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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "exhaustive_oracle.hpp"
#include "mcd2d/assistance.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/mean_covered.hpp"
#include "mcd2d/optimizer.hpp"

using namespace mcd2d;
using std::numbers::pi;

namespace {

std::shared_ptr<const AssistModel> shared_model()
{
    static const auto model = std::make_shared<const AssistModel>(SystemParams::table_one());
    return model;
}

std::vector<CellInstance> random_cells(int count, unsigned seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lb = SystemParams::table_one().lambda_b;
    std::vector<CellInstance> cells;
    for (int c = 0; c < count; ++c) {
        CellInstance cell;
        cell.model = shared_model();
        const int m = size(gen);
        for (int i = 0; i < m; ++i)
            cell.distances.push_back(std::sqrt(-std::log1p(-unit(gen)) / (pi * lb)));
        std::sort(cell.distances.begin(), cell.distances.end());
        cell.budget = std::uniform_int_distribution<int>(0, m)(gen);
        cell.eta = 0.8 + 0.19 * unit(gen);
        cells.push_back(cell);
    }
    return cells;
}

int count_assisted(const std::vector<int>& a) { return static_cast<int>(std::count(a.begin(), a.end(), 1)); }

double spearman_oracle(std::vector<double> x, std::vector<double> y)
{
    auto ranks = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0, equal = 0;
            for (double w : v) {
                less += w < v[i];
                equal += w == v[i];
            }
            r[i] = less + (equal + 1) / 2;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i] / n;
        my += ry[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST_CASE("model quantities agree with the analytic modules")
{
    const auto& m = *shared_model();
    auto p = m.params();
    CHECK(m.n_max() == doctest::Approx(p.n_max()));
    for (int tau : {1, 2, 5, 16}) {
        p.tau_m = tau;
        CHECK(m.mean_covered(tau) == doctest::Approx(mean_covered(p)).epsilon(1e-12));
    }
    double prev = 0.0;
    for (int tau = 1; tau <= kTauCap; tau *= 2) {
        CHECK(m.mean_covered(tau) >= prev);
        CHECK(m.mean_covered(tau) <= m.n_max());
        prev = m.mean_covered(tau);
    }
    for (double r : {0.0, 120.0, 600.0}) {
        CHECK(m.q(r) == doctest::Approx(assist_link_probability(r, p)).epsilon(1e-12));
        CHECK(m.h(r, 3, 1.0) == doctest::Approx(h_value(r, 3, 1.0, p)).epsilon(1e-12));
    }
    CHECK(m.h(0.0, 2, 1.0) == doctest::Approx(m.n_max()));
    CHECK(m.h(250.0, 2, 0.0) == doctest::Approx(m.mean_covered(2)));
    CHECK(m.h(100.0, 2, 1.0) > m.h(300.0, 2, 1.0));
}

TEST_CASE("solver matches exhaustive search on random cells")
{
    int feasible = 0;
    for (const auto& cell : random_cells(100, 2024)) {
        const auto sol = solve_cell(cell);
        const auto oracle = testing::exhaustive_solve(cell);
        CHECK(sol.feasible == oracle.feasible);
        if (!oracle.feasible)
            continue;
        ++feasible;
        CHECK(sol.tau_star == oracle.tau);
        CHECK(count_assisted(sol.assist) == oracle.assisted);
        const auto f = check_feasible(cell, sol.tau_star, sol.assist);
        CHECK(f.feasible);
        CHECK(f.achieved == doctest::Approx(sol.achieved_reliability));
    }
    CHECK(feasible > 50);
}

TEST_CASE("assisted set is a prefix of the nearest transmitters")
{
    for (const auto& cell : random_cells(100, 77)) {
        const auto sol = solve_cell(cell);
        const int k = count_assisted(sol.assist);
        for (int i = 0; i < static_cast<int>(sol.assist.size()); ++i)
            CHECK(sol.assist[i] == (i < k ? 1 : 0));
        CHECK(k <= std::max(cell.budget, 0));
    }
}

TEST_CASE("moving assistance to a nearer transmitter never hurts")
{
    std::mt19937 gen(5);
    for (const auto& cell : random_cells(60, 9)) {
        const std::size_t m = cell.distances.size();
        if (m < 2)
            continue;
        std::vector<int> assist(m, 0);
        for (auto& a : assist)
            a = gen() & 1u;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                if (!(assist[i] == 0 && assist[j] == 1))
                    continue;
                auto swapped = assist;
                std::swap(swapped[i], swapped[j]);
                for (int tau : {1, 4})
                    CHECK(check_feasible(cell, tau, swapped).achieved >=
                          check_feasible(cell, tau, assist).achieved - 1e-15);
            }
    }
}

TEST_CASE("reliability grows with repetitions and with assistance")
{
    for (const auto& cell : random_cells(30, 3)) {
        std::vector<int> none(cell.distances.size(), 0), all(cell.distances.size(), 1);
        double prev = 0.0;
        for (int tau = 1; tau <= 64; tau *= 2) {
            const double a = check_feasible(cell, tau, none).achieved;
            CHECK(a >= prev);
            CHECK(check_feasible(cell, tau, all).achieved >= a);
            prev = a;
        }
    }
}

TEST_CASE("boundary cases of the cell problem")
{
    const auto model = shared_model();
    CellInstance cell{{80.0, 200.0, 450.0}, 0, 0.9, model};
    const auto sol = solve_cell(cell);
    REQUIRE(sol.feasible);
    CHECK(count_assisted(sol.assist) == 0);
    int expected = 1;
    while (model->mean_covered(expected) / model->n_max() < 0.9)
        ++expected;
    CHECK(sol.tau_star == expected);

    cell.eta = 0.0;
    CHECK(solve_cell(cell).tau_star == 1);
    CHECK(find_tau_max(cell) == 1);

    cell.eta = 0.9999999;
    CHECK_THROWS_AS(find_tau_max(cell), InfeasibleError);
    const auto impossible = solve_cell(cell);
    CHECK_FALSE(impossible.feasible);
    CHECK(impossible.tau_star == kTauCap);

    CellInstance empty{{}, 2, 0.95, model};
    CHECK(solve_cell(empty).feasible);
    CHECK(check_feasible(empty, 1, {}).feasible);

    CHECK_THROWS_AS(check_feasible(cell, 1, {1, 0}), ConfigError);
    CHECK_THROWS_AS(check_feasible(cell, 1, {2, 0, 0}), ConfigError);
    CellInstance bad{{300.0, 100.0}, 1, 0.9, model};
    CHECK_THROWS_AS(solve_cell(bad), ConfigError);
}

TEST_CASE("budget limits the assisted count")
{
    const auto model = shared_model();
    CellInstance cell{{30.0, 60.0, 90.0, 120.0}, 2, 0.99, model};
    std::vector<int> three{1, 1, 1, 0};
    CHECK_FALSE(check_feasible(cell, kTauCap, three).feasible);
    CHECK(count_assisted(solve_cell(cell).assist) <= 2);
}

TEST_CASE("relaxed policy evaluation")
{
    const auto& m = *shared_model();
    const auto& p = m.params();
    const int tau = 2;
    const double base = m.mean_covered(tau) / m.n_max();

    const auto off = evaluate_relaxed({{0.0, INFINITY}, {0.0}}, tau, m);
    CHECK(off.usage == 0.0);
    CHECK(off.reliability == doctest::Approx(base).epsilon(1e-9));
    CHECK(off.usage_limit == doctest::Approx(p.budget * p.lambda_b / p.lambda_m));

    // E_D[q(D)] over the nearest-BS distance is p_c
    const auto on = evaluate_relaxed({{0.0, INFINITY}, {1.0}}, tau, m);
    CHECK(on.usage == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(on.reliability ==
          doctest::Approx(base + bs_coverage_pc(p) * (1.0 - base)).epsilon(1e-7));

    const double median = std::sqrt(std::log(2.0) / (pi * p.lambda_b));
    const auto half = evaluate_relaxed({{0.0, median, INFINITY}, {1.0, 0.0}}, tau, m);
    CHECK(half.usage == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(half.usage_ok == (0.5 <= half.usage_limit));
    CHECK(half.reliability > base);
    CHECK(half.reliability < on.reliability);

    CHECK_THROWS_AS(evaluate_relaxed({{0.0, 10.0}, {1.0}}, tau, m), ConfigError);
    CHECK_THROWS_AS(evaluate_relaxed({{0.0, INFINITY}, {1.5}}, tau, m), ConfigError);
}

TEST_CASE("policy histogram bookkeeping")
{
    auto h = PolicyHistogram::uniform(25.0, 100.0);
    CHECK(h.bins() == 5);
    CHECK(h.bin_of(0.0) == 0);
    CHECK(h.bin_of(24.999) == 0);
    CHECK(h.bin_of(25.0) == 1);
    CHECK(h.bin_of(99.0) == 3);
    CHECK(h.bin_of(1e6) == 4);
    CHECK(std::isnan(h.frequency(2)));
    h.add(10.0, true);
    h.add(12.0, false);
    auto g = PolicyHistogram::uniform(25.0, 100.0);
    g.add(11.0, true);
    g.add(500.0, false);
    auto merged = h;
    merged.merge(g);
    auto reversed = g;
    reversed.merge(h);
    CHECK(merged.counts == reversed.counts);
    CHECK(merged.assisted == reversed.assisted);
    CHECK(merged.frequency(0) == doctest::Approx(2.0 / 3.0));
    CHECK(merged.frequency(4) == 0.0);
    CHECK_THROWS_AS(merged.merge(PolicyHistogram::uniform(10.0, 100.0)), ConfigError);
}

TEST_CASE("rank trend of a histogram")
{
    auto h = PolicyHistogram::uniform(10.0, 60.0);
    const std::vector<double> centres{5, 15, 25, 35, 45, 55};
    const std::vector<int> hits{9, 7, 7, 4, 1, 0};
    for (std::size_t b = 0; b < centres.size(); ++b)
        for (int i = 0; i < 10; ++i)
            h.add(centres[b], i < hits[b]);
    std::vector<double> bins, freq;
    for (std::size_t b = 0; b < centres.size(); ++b) {
        bins.push_back(b);
        freq.push_back(hits[b] / 10.0);
    }
    CHECK(histogram_trend(h) == doctest::Approx(spearman_oracle(bins, freq)).epsilon(1e-12));
    CHECK(histogram_trend(h) < -0.9);
}

TEST_CASE("aggregation")
{
    const auto model = shared_model();
    const auto a = aggregate_policy(model, 4, 25.0, 3000.0, 3, 1);
    const auto b = aggregate_policy(model, 4, 25.0, 3000.0, 3, 3);
    CHECK(a.histogram.counts == b.histogram.counts);
    CHECK(a.histogram.assisted == b.histogram.assisted);
    CHECK(a.tau_bar == b.tau_bar);
    CHECK(a.cells > 0);
    CHECK(a.tau_bar >= 1.0);

    // nearest transmitters are assisted more often
    const auto big = aggregate_policy(model, 20, 25.0, 4000.0, 5);
    CHECK(histogram_trend(big.histogram) < -0.5);

    // an unreachable target with an unlimited budget assists everyone
    auto p = SystemParams::table_one();
    p.eta = 0.9999999;
    p.budget = 1000;
    const auto greedy = aggregate_policy(std::make_shared<const AssistModel>(p), 1, 25.0, 2000.0, 1);
    CHECK(greedy.infeasible_cells == greedy.cells - greedy.empty_cells);
    for (std::size_t bin = 0; bin < greedy.histogram.bins(); ++bin)
        if (greedy.histogram.counts[bin] > 0)
            CHECK(greedy.histogram.frequency(bin) == 1.0);
}

TEST_CASE("cell fixtures round trip")
{
    const auto cells = random_cells(5, 1);
    std::stringstream s;
    write_cells(s, cells);
    const auto back = read_cells(s, shared_model());
    REQUIRE(back.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(back[i].budget == cells[i].budget);
        CHECK(back[i].eta == cells[i].eta);
        CHECK(back[i].distances == cells[i].distances);
    }
    std::istringstream bad("cell\nbudget 2\neta x\n");
    try {
        read_cells(bad, shared_model());
        FAIL("malformed fixture accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}
