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
#include <memory>
#include <mutex>
#include <vector>

#include "mcd2d/params.hpp"

namespace mcd2d {

/// Per-parameter quantities shared by every cell: N(tau), q(r), N_max.
class AssistModel {
public:
    explicit AssistModel(const SystemParams& params);

    const SystemParams& params() const { return params_; }
    double n_max() const { return n_max_; }

    /// Certified lower end of E[N] at tau repetitions; exact whenever the
    /// inclusion-exclusion is. Memoized, thread-safe.
    double mean_covered(int tau) const;

    /// q(r) for the serving BS at distance r.
    double q(double r) const;

    /// h(r; tau, g) = N(tau) + g q(r) (N_max - N(tau)).
    double h(double r, int tau, double g) const;

private:
    SystemParams params_;
    double n_max_ = 0.0;
    double h_integral_ = 0.0;
    std::vector<double> moments_;
    mutable std::mutex mutex_;
    mutable std::vector<double> table_; // index tau; NaN until computed
};

double h_value(double r, int tau, double g, const SystemParams& params);

struct CellInstance {
    std::vector<double> distances; ///< transmitter-to-BS distances, ascending
    int budget = 0;
    double eta = 0.0;
    std::shared_ptr<const AssistModel> model;

    void validate() const;
};

struct Feasibility {
    bool feasible = false;
    double achieved = 0.0; ///< sum_i h(r_i) / (M N_max)
};

Feasibility check_feasible(const CellInstance& cell, int tau, const std::vector<int>& assist);

inline constexpr int kTauCap = 1024;

/// Smallest power of two at which repetition alone (or, failing that, assisting the
/// min(M, B) nearest transmitters) meets eta. Throws InfeasibleError past the cap.
int find_tau_max(const CellInstance& cell, int cap = kTauCap);

struct AssistSolution {
    int tau_star = 1;
    std::vector<int> assist;
    double achieved_reliability = 0.0;
    bool feasible = false;
};

/// Minimal tau, then the minimal number of assisted transmitters at that tau.
/// Infeasible cells come back with feasible = false, tau_star = cap and the best
/// achieved reliability.
AssistSolution solve_cell(const CellInstance& cell, int cap = kTauCap);

/// g(r) = values[i] on [edges[i], edges[i+1]); edges start at 0 and end at +inf.
struct PiecewiseConstantPolicy {
    std::vector<double> edges;
    std::vector<double> values;

    void validate() const;
};

struct RelaxedEvaluation {
    double usage = 0.0;        ///< E_D[g(D)]
    double usage_limit = 0.0;  ///< B lambda_b / lambda_m
    double reliability = 0.0;  ///< E_D[h(D)] / N_max
    bool usage_ok = false;
    bool reliability_ok = false;
};

/// D is the Rayleigh-distributed transmitter-to-BS distance.
RelaxedEvaluation evaluate_relaxed(const PiecewiseConstantPolicy& policy, int tau,
                                   const AssistModel& model);

struct PolicyHistogram {
    double bin_width = 25.0;
    std::vector<double> edges;      ///< 0, w, 2w, ..., last finite edge, +inf
    std::vector<long long> counts;  ///< (BS, transmitter) pairs per bin
    std::vector<long long> assisted;

    static PolicyHistogram uniform(double bin_width, double finite_extent);

    std::size_t bins() const { return counts.size(); }
    std::size_t bin_of(double r) const;
    void add(double r, bool was_assisted);
    void merge(const PolicyHistogram& other);
    /// NaN for an empty bin.
    double frequency(std::size_t bin) const;
};

struct PolicyAggregate {
    PolicyHistogram histogram;
    double tau_bar = 0.0;       ///< mean tau* over nonempty feasible cells
    long long cells = 0;        ///< BSs inside the extent
    long long empty_cells = 0;
    long long infeasible_cells = 0;
};

/// Cells of the BSs inside B(0, extent) for one network realization. Points are drawn
/// in B(0, extent + margin) so that those cells are complete.
std::vector<CellInstance> sample_cells(std::shared_ptr<const AssistModel> model, double extent,
                                       double margin, std::uint64_t seed,
                                       std::uint32_t realization);

PolicyAggregate aggregate_policy(std::shared_ptr<const AssistModel> model, int realizations,
                                 double bin_width, double extent, std::uint64_t seed,
                                 int threads = 0, double histogram_extent = 1000.0,
                                 double margin = 1000.0);

/// Spearman rank correlation of bin index vs frequency over occupied bins.
double histogram_trend(const PolicyHistogram& histogram);

/// Text fixtures: "cell / budget B / eta E / distances r1 r2 ... / end" blocks.
void write_cells(std::ostream& out, const std::vector<CellInstance>& cells);
std::vector<CellInstance> read_cells(std::istream& in, std::shared_ptr<const AssistModel> model);

} // namespace mcd2d
