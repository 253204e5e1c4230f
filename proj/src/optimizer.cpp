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


#include "mcd2d/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <boost/math/statistics/bivariate_statistics.hpp>

#include "mcd2d/alternating.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/mean_covered.hpp"
#include "mcd2d/quadrature.hpp"
#include "mcd2d/rng.hpp"
#include "mcd2d/simulator.hpp"
#include "mcd2d/special.hpp"

namespace mcd2d {

using std::numbers::pi;

AssistModel::AssistModel(const SystemParams& params) : params_(params)
{
    params_.validate();
    n_max_ = params_.n_max();
    h_integral_ = h_integral(params_.threshold, params_.alpha);
    moments_ = mean_covered_moments(params_, kMaxExactRepetitions);
    table_.assign(kTauCap + 1, std::numeric_limits<double>::quiet_NaN());
}

double AssistModel::mean_covered(int tau) const
{
    if (tau < 1)
        throw ConfigError("AssistModel: tau must be at least 1");
    {
        std::lock_guard lock(mutex_);
        if (static_cast<std::size_t>(tau) < table_.size() && !std::isnan(table_[tau]))
            return table_[tau];
    }
    const double v = alternating_bracket(tau, moments_, n_max_, n_max_).lower;
    std::lock_guard lock(mutex_);
    if (static_cast<std::size_t>(tau) >= table_.size())
        table_.resize(tau + 1, std::numeric_limits<double>::quiet_NaN());
    table_[tau] = v;
    return v;
}

double AssistModel::q(double r) const
{
    return std::exp(-params_.threshold * params_.snr_c_inv() * params_.pathloss_intercept *
                        std::pow(r, params_.alpha) -
                    2.0 * pi * params_.lambda_b * h_integral_ * r * r);
}

double AssistModel::h(double r, int tau, double g) const
{
    if (!(g >= 0.0 && g <= 1.0))
        throw ConfigError("h: assistance level must lie in [0, 1]");
    if (!(r >= 0.0))
        throw ConfigError("h: distance must be nonnegative");
    const double n = mean_covered(tau);
    return n + g * q(r) * (n_max_ - n);
}

double h_value(double r, int tau, double g, const SystemParams& params)
{
    return AssistModel(params).h(r, tau, g);
}

void CellInstance::validate() const
{
    if (!model)
        throw ConfigError("cell instance has no model");
    if (budget < 0)
        throw ConfigError("cell budget must be nonnegative");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("cell eta must lie in [0, 1]");
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0) || !std::isfinite(distances[i]))
            throw ConfigError("cell distances must be positive");
        if (i > 0 && distances[i] < distances[i - 1])
            throw ConfigError("cell distances must be sorted ascending");
    }
}

namespace {

/// Reliability with the k nearest transmitters assisted.
double prefix_reliability(const CellInstance& cell, int tau, std::size_t k)
{
    const AssistModel& m = *cell.model;
    const double n = m.mean_covered(tau);
    double assisted = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        assisted += m.q(cell.distances[i]);
    const double count = static_cast<double>(cell.distances.size());
    return (count * n + assisted * (m.n_max() - n)) / (count * m.n_max());
}

std::size_t max_prefix(const CellInstance& cell)
{
    return std::min(cell.distances.size(), static_cast<std::size_t>(cell.budget));
}

} // namespace

Feasibility check_feasible(const CellInstance& cell, int tau, const std::vector<int>& assist)
{
    cell.validate();
    if (assist.size() != cell.distances.size())
        throw ConfigError("check_feasible: assist vector length differs from the cell size");
    if (cell.distances.empty())
        return {true, 1.0};
    const AssistModel& m = *cell.model;
    double total = 0.0;
    long used = 0;
    for (std::size_t i = 0; i < assist.size(); ++i) {
        if (assist[i] != 0 && assist[i] != 1)
            throw ConfigError("check_feasible: assist entries must be 0 or 1");
        used += assist[i];
        total += m.h(cell.distances[i], tau, assist[i]);
    }
    Feasibility f;
    f.achieved = total / (static_cast<double>(assist.size()) * m.n_max());
    f.feasible = used <= cell.budget && f.achieved >= cell.eta;
    return f;
}

int find_tau_max(const CellInstance& cell, int cap)
{
    cell.validate();
    if (cell.distances.empty())
        return 1;
    for (int tau = 1; tau <= cap; tau *= 2)
        if (prefix_reliability(cell, tau, 0) >= cell.eta)
            return tau;
    const std::size_t k = max_prefix(cell);
    for (int tau = 1; tau <= cap; tau *= 2)
        if (prefix_reliability(cell, tau, k) >= cell.eta)
            return tau;
    throw InfeasibleError("reliability target not reached within tau cap " + std::to_string(cap),
                          prefix_reliability(cell, cap, k));
}

AssistSolution solve_cell(const CellInstance& cell, int cap)
{
    cell.validate();
    AssistSolution out;
    out.assist.assign(cell.distances.size(), 0);
    if (cell.distances.empty()) {
        out.tau_star = 1;
        out.achieved_reliability = 1.0;
        out.feasible = true;
        return out;
    }
    const std::size_t k_max = max_prefix(cell);
    int hi = 0;
    try {
        hi = find_tau_max(cell, cap);
    } catch (const InfeasibleError& e) {
        out.tau_star = cap;
        out.assist.assign(cell.distances.size(), 0);
        std::fill(out.assist.begin(), out.assist.begin() + k_max, 1);
        out.achieved_reliability = e.best_achieved();
        out.feasible = false;
        return out;
    }
    // smallest tau at which the full prefix is feasible; feasibility is monotone in tau
    int lo = 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (prefix_reliability(cell, mid, k_max) >= cell.eta)
            hi = mid;
        else
            lo = mid + 1;
    }
    const int tau = lo;
    std::size_t k = 0;
    while (k < k_max && prefix_reliability(cell, tau, k) < cell.eta)
        ++k;
    out.tau_star = tau;
    std::fill(out.assist.begin(), out.assist.begin() + k, 1);
    out.achieved_reliability = prefix_reliability(cell, tau, k);
    out.feasible = true;
    return out;
}

void PiecewiseConstantPolicy::validate() const
{
    if (edges.size() < 2 || values.size() + 1 != edges.size())
        throw ConfigError("policy needs one value per bin");
    if (edges.front() != 0.0 || !std::isinf(edges.back()))
        throw ConfigError("policy edges must start at 0 and end at +inf");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw ConfigError("policy edges must increase strictly");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError("policy values must lie in [0, 1]");
}

RelaxedEvaluation evaluate_relaxed(const PiecewiseConstantPolicy& policy, int tau,
                                   const AssistModel& model)
{
    policy.validate();
    const SystemParams& p = model.params();
    const double lb = p.lambda_b;
    auto tail_mass = [&](double r) { return std::isinf(r) ? 0.0 : std::exp(-lb * pi * r * r); };
    auto density = [&](double r) { return 2.0 * pi * lb * r * std::exp(-lb * pi * r * r); };
    auto weighted = [&](double r) { return model.q(r) * density(r); };
    RelaxedEvaluation out;
    double gain = 0.0; // E[g(D) q(D)]
    for (std::size_t i = 0; i < policy.values.size(); ++i) {
        const double a = policy.edges[i], b = policy.edges[i + 1];
        const double g = policy.values[i];
        out.usage += g * (tail_mass(a) - tail_mass(b));
        if (g == 0.0)
            continue;
        const double part = std::isinf(b)
                                ? quad::semi_infinite(weighted, a, {}, "evaluate_relaxed")
                                : quad::finite(weighted, a, b, {}, "evaluate_relaxed");
        gain += g * part;
    }
    const double n = model.mean_covered(tau);
    out.reliability = (n + gain * (model.n_max() - n)) / model.n_max();
    out.usage_limit = p.budget * p.lambda_b / p.lambda_m;
    out.usage_ok = out.usage <= out.usage_limit;
    out.reliability_ok = out.reliability >= p.eta;
    return out;
}

PolicyHistogram PolicyHistogram::uniform(double bin_width, double finite_extent)
{
    if (!(bin_width > 0.0) || !(finite_extent >= bin_width))
        throw ConfigError("histogram needs a positive bin width no larger than its extent");
    PolicyHistogram h;
    h.bin_width = bin_width;
    const auto finite = static_cast<std::size_t>(std::ceil(finite_extent / bin_width - 1e-9));
    for (std::size_t i = 0; i <= finite; ++i)
        h.edges.push_back(i * bin_width);
    h.edges.push_back(std::numeric_limits<double>::infinity());
    h.counts.assign(finite + 1, 0);
    h.assisted.assign(finite + 1, 0);
    return h;
}

std::size_t PolicyHistogram::bin_of(double r) const
{
    const auto i = static_cast<std::size_t>(std::max(0.0, r) / bin_width);
    return std::min(i, counts.size() - 1);
}

void PolicyHistogram::add(double r, bool was_assisted)
{
    const std::size_t i = bin_of(r);
    ++counts[i];
    assisted[i] += was_assisted ? 1 : 0;
}

void PolicyHistogram::merge(const PolicyHistogram& other)
{
    if (other.edges != edges)
        throw ConfigError("cannot merge histograms with different bins");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        counts[i] += other.counts[i];
        assisted[i] += other.assisted[i];
    }
}

double PolicyHistogram::frequency(std::size_t bin) const
{
    if (counts.at(bin) == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(assisted[bin]) / counts[bin];
}

std::vector<CellInstance> sample_cells(std::shared_ptr<const AssistModel> model, double extent,
                                       double margin, std::uint64_t seed,
                                       std::uint32_t realization)
{
    const SystemParams& p = model->params();
    const double radius = extent + margin;
    const auto bs = sample_poisson_disc(p.lambda_b, radius, seed, realization,
                                        StreamPurpose::bs_field);
    const auto tx = sample_poisson_disc(p.lambda_m, radius, seed, realization,
                                        StreamPurpose::tx_field);
    std::vector<std::vector<double>> members(bs.size());
    for (const auto& x : tx) {
        if (bs.empty())
            break;
        std::size_t best = 0;
        double best_d2 = (bs[0] - x).squaredNorm();
        for (std::size_t b = 1; b < bs.size(); ++b) {
            const double d2 = (bs[b] - x).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = b;
            }
        }
        members[best].push_back(std::sqrt(best_d2));
    }
    std::vector<CellInstance> cells;
    for (std::size_t b = 0; b < bs.size(); ++b) {
        if (bs[b].norm() > extent)
            continue;
        CellInstance c;
        c.distances = std::move(members[b]);
        std::sort(c.distances.begin(), c.distances.end());
        c.budget = p.budget;
        c.eta = p.eta;
        c.model = model;
        cells.push_back(std::move(c));
    }
    return cells;
}

PolicyAggregate aggregate_policy(std::shared_ptr<const AssistModel> model, int realizations,
                                 double bin_width, double extent, std::uint64_t seed, int threads,
                                 double histogram_extent, double margin)
{
    if (realizations < 1)
        throw ConfigError("aggregate_policy: at least one realization required");
    if (!(extent > 0.0) || !(margin >= 0.0))
        throw ConfigError("aggregate_policy: extent must be positive");
    struct Partial {
        PolicyHistogram histogram;
        long long tau_sum = 0, solved = 0, cells = 0, empty = 0, infeasible = 0;
    };
    const auto empty_hist = PolicyHistogram::uniform(bin_width, histogram_extent);
    std::vector<Partial> parts(realizations, Partial{empty_hist});
    std::vector<std::exception_ptr> failure(realizations);
    auto work = [&](int r) {
        try {
            Partial& part = parts[r];
            for (const auto& cell : sample_cells(model, extent, margin, seed,
                                                 static_cast<std::uint32_t>(r))) {
                ++part.cells;
                if (cell.distances.empty()) {
                    ++part.empty;
                    continue;
                }
                const auto sol = solve_cell(cell);
                for (std::size_t i = 0; i < cell.distances.size(); ++i)
                    part.histogram.add(cell.distances[i], sol.assist[i] != 0);
                if (!sol.feasible) {
                    ++part.infeasible;
                    continue;
                }
                part.tau_sum += sol.tau_star;
                ++part.solved;
            }
        } catch (...) {
            failure[r] = std::current_exception();
        }
    };
    const unsigned workers = std::min<unsigned>(
        threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency()), realizations);
    if (workers <= 1) {
        for (int r = 0; r < realizations; ++r)
            work(r);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int r = static_cast<int>(w); r < realizations; r += workers)
                    work(r);
            });
        for (auto& t : pool)
            t.join();
    }
    for (auto& f : failure)
        if (f)
            std::rethrow_exception(f);

    PolicyAggregate out;
    out.histogram = empty_hist;
    long long tau_sum = 0, solved = 0;
    for (const auto& part : parts) {
        out.histogram.merge(part.histogram);
        tau_sum += part.tau_sum;
        solved += part.solved;
        out.cells += part.cells;
        out.empty_cells += part.empty;
        out.infeasible_cells += part.infeasible;
    }
    out.tau_bar = solved > 0 ? static_cast<double>(tau_sum) / solved
                             : std::numeric_limits<double>::quiet_NaN();
    return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

} // namespace

double histogram_trend(const PolicyHistogram& histogram)
{
    std::vector<double> index, freq;
    for (std::size_t i = 0; i < histogram.bins(); ++i)
        if (histogram.counts[i] > 0) {
            index.push_back(static_cast<double>(i));
            freq.push_back(histogram.frequency(i));
        }
    if (index.size() < 2)
        throw NumericalError("histogram_trend: fewer than two occupied bins");
    const auto ri = average_ranks(index), rf = average_ranks(freq);
    return boost::math::statistics::correlation_coefficient(ri, rf);
}

void write_cells(std::ostream& out, const std::vector<CellInstance>& cells)
{
    const auto old = out.precision(17);
    for (const auto& c : cells) {
        out << "cell\nbudget " << c.budget << "\neta " << c.eta << "\ndistances";
        for (double r : c.distances)
            out << ' ' << r;
        out << "\nend\n";
    }
    out.precision(old);
}

std::vector<CellInstance> read_cells(std::istream& in, std::shared_ptr<const AssistModel> model)
{
    std::vector<CellInstance> cells;
    std::string line;
    int line_no = 0;
    bool open = false;
    CellInstance current;
    auto fail = [&](const std::string& what) {
        throw ConfigError("cell fixture line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string key;
        if (!(fields >> key) || key[0] == '#')
            continue;
        if (key == "cell") {
            if (open)
                fail("'cell' before 'end'");
            open = true;
            current = CellInstance{};
            current.model = model;
        } else if (key == "end") {
            if (!open)
                fail("'end' without 'cell'");
            current.validate();
            cells.push_back(current);
            open = false;
        } else if (!open) {
            fail("field outside a cell block");
        } else if (key == "budget") {
            if (!(fields >> current.budget))
                fail("budget needs an integer");
        } else if (key == "eta") {
            if (!(fields >> current.eta))
                fail("eta needs a number");
        } else if (key == "distances") {
            double r;
            while (fields >> r)
                current.distances.push_back(r);
            if (!fields.eof())
                fail("distances must be numbers");
        } else {
            fail("unknown field '" + key + "'");
        }
    }
    if (open)
        fail("missing 'end'");
    return cells;
}

} // namespace mcd2d
