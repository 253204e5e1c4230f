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

#include <vector>

#include "mcd2d/alternating.hpp"
#include "mcd2d/coverage.hpp"
#include "mcd2d/params.hpp"

namespace mcd2d {

/// M_n = 2 pi lambda_r int_0^R r p_n(r) dr for n = 1 .. count.
std::vector<double> mean_covered_moments(const SystemParams& params, int count,
                                         Mobility mobility = Mobility::static_nodes);

/// Expected number of receivers of the typical cluster reached within tau_m slots.
/// Throws NumericalError when the value cannot be certified; see mean_covered_bracket.
double mean_covered(const SystemParams& params, Mobility mobility = Mobility::static_nodes);

Bracket mean_covered_bracket(const SystemParams& params,
                             Mobility mobility = Mobility::static_nodes);

/// Closed form through the Gaussian tail. Requires alpha = 4 and positive noise.
double mean_covered_q_form(const SystemParams& params);

/// Closed form with the noise term dropped.
double mean_covered_no_noise(const SystemParams& params);

enum class AsymptoticRegime {
    dense,  ///< lambda_m R^2 -> inf without noise
    sparse, ///< lambda_m -> 0
};

double mean_covered_asymptotic(const SystemParams& params, AsymptoticRegime regime);

/// Distance beyond which noise alone caps the one-slot success below 1/e.
double threshold_distance(const SystemParams& params);

struct NullClusterFraction {
    double fraction = 0.0;          ///< P(no receiver within effective_radius)
    double threshold_distance = 0.0;
    double effective_radius = 0.0;  ///< min(R, threshold_distance)
    bool poisson_receivers = true;  ///< fraction assumes Poisson receiver counts
};

NullClusterFraction null_cluster_fraction(const SystemParams& params);

/// E[N] log(1 + T) / tau_m in nats per channel use.
double throughput(const SystemParams& params, Mobility mobility = Mobility::static_nodes);

/// Threshold maximizing throughput in the dense interference-limited regime:
/// root of x / (1 + x) = (2 / alpha) log(1 + x) above alpha / 2 - 1.
double optimal_rate_asymptotic(double alpha);

struct RateOptimum {
    double threshold = 0.0;   ///< linear
    double throughput = 0.0;  ///< nats per channel use
    bool flat = false;        ///< curvature at the optimum below tolerance
    bool at_boundary = false; ///< optimum sits on the search boundary
};

/// Grid search in dB followed by Brent refinement.
RateOptimum optimal_rate_general(const SystemParams& params, double lo_db = -10.0,
                                 double hi_db = 20.0, int grid_points = 61);

/// Throughput of tau_m unicast slots to uniformly placed receivers.
/// With `conditional_on_nonempty`, clusters without receivers are excluded.
double unicast_baseline(const SystemParams& params, bool conditional_on_nonempty = false);

enum class MobilityOp { p_n_single, coverage_probability, mean_covered };

struct MobilityComparison {
    double static_value = 0.0;
    double mobile_value = 0.0;
};

/// Evaluates `op` under both mobility models. `distance` and `n` are ignored where
/// the operation does not take them.
MobilityComparison mobility_variant(MobilityOp op, const SystemParams& params,
                                    double distance = 0.0, int n = 1);

} // namespace mcd2d
