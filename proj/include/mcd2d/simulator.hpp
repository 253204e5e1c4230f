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
#include <vector>

#include "mcd2d/channel.hpp"
#include "mcd2d/coverage.hpp"
#include "mcd2d/params.hpp"
#include "mcd2d/rng.hpp"

namespace mcd2d {

struct SimConfig {
    long trials = 10000;
    double window_radius = 0.0;      ///< 0 selects default_window()
    std::uint64_t seed = 1;
    Mobility mobility = Mobility::static_nodes;
    bool assist = false;             ///< nearest-BS downlink as an extra chance
    double min_link_distance = 1.0;  ///< [m]
    int threads = 0;                 ///< 0 = hardware concurrency
    bool enforce_window_guard = true;

    static double default_window(const SystemParams& params);
    static double minimum_window(const SystemParams& params);

    double resolved_window(const SystemParams& params) const;
    void validate(const SystemParams& params) const;
};

struct CoverageEstimate {
    double estimate = 0.0;
    long trials = 0;
    double std_error = 0.0;
    double half_width = 0.0; ///< 1.96 std_error

    static CoverageEstimate from_bernoulli(long successes, long trials);
    static CoverageEstimate from_counts(long long sum, long long sum_sq, long trials);
};

/// Points of a homogeneous PPP in B(0, radius). The disc is cut into equal-mass
/// annuli, each drawn from its own substream, so a larger radius only adds points.
std::vector<Point> sample_poisson_disc(double density, double radius, std::uint64_t seed,
                                       std::uint32_t trial, StreamPurpose purpose,
                                       std::uint32_t slot = 0);

/// Receivers of the cluster centred at the origin, at least `min_distance` away.
std::vector<Point> sample_cluster(double density, double radius, double min_distance,
                                  Substream& rng);

/// Full realization for one trial: typical transmitter at the origin, its receivers,
/// the other transmitters with theirs, and the BSs when assistance is enabled.
NetworkSnapshot sample_snapshot(const SystemParams& params, const SimConfig& config,
                                std::uint32_t trial);

CoverageEstimate estimate_coverage(double distance, const SystemParams& params,
                                   const SimConfig& config);

/// Assisted probe coverage (config.assist is forced on).
CoverageEstimate estimate_assisted_coverage(double distance, const SystemParams& params,
                                            const SimConfig& config);

/// Estimates for every threshold and every tau = 1 .. params.tau_m from one run.
struct CoverageSweep {
    std::vector<double> thresholds;
    int tau_max = 0;
    std::vector<CoverageEstimate> estimates; ///< [i * tau_max + (tau - 1)]

    const CoverageEstimate& at(std::size_t threshold_index, int tau) const
    {
        return estimates.at(threshold_index * tau_max + (tau - 1));
    }
};

CoverageSweep estimate_coverage_sweep(double distance, const std::vector<double>& thresholds,
                                      const SystemParams& params, const SimConfig& config);

CoverageEstimate estimate_mean_covered(const SystemParams& params, const SimConfig& config);

/// Covered-receiver counts laid out like CoverageSweep.
CoverageSweep estimate_mean_covered_sweep(const std::vector<double>& thresholds,
                                          const SystemParams& params, const SimConfig& config);

struct JointCoverageEstimate {
    CoverageEstimate joint;
    CoverageEstimate marginal1;
    CoverageEstimate marginal2;
    CoverageEstimate conditional; ///< joint / marginal2 among trials where y2 succeeds
};

/// Two probes at distances d1, d2 and `separation` apart, each required to succeed in
/// all of n slots against a shared interferer field. separation = 0 is one receiver.
JointCoverageEstimate estimate_joint_coverage(double d1, double d2, double separation, int n,
                                              const SystemParams& params,
                                              const SimConfig& config);

/// Fraction of clusters in which no receiver reaches the threshold SNR without interference.
CoverageEstimate estimate_null_fraction(const SystemParams& params, const SimConfig& config);

} // namespace mcd2d
