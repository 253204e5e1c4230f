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

#include <functional>
#include <vector>

#include "mcd2d/alternating.hpp"
#include "mcd2d/params.hpp"
#include "mcd2d/quadrature.hpp"

namespace mcd2d {

/// Static: interferer positions are frozen over the tau_m slots.
/// High: positions are redrawn every slot.
enum class Mobility { static_nodes, high };

/// K(alpha, n) at the precise setting, memoized per (alpha, n). Thread-safe.
double cached_k(double alpha, int n);

/// K(alpha, n) under the chosen mobility: K(alpha, n) or n K(alpha, 1).
double effective_k(double alpha, int n, Mobility mobility);

/// Probability that n slots in a row succeed at distance d from the transmitter.
double p_n_single(double distance, int n, const SystemParams& params,
                  Mobility mobility = Mobility::static_nodes);

/// Same event for an arbitrary attenuation l(r), static interferers, by quadrature.
double p_n_single_general(double distance, int n, const SystemParams& params,
                          const std::function<double(double)>& attenuation,
                          const QuadratureConfig& cfg = {});

/// p_1 .. p_count at distance d.
std::vector<double> coverage_moments(double distance, int count, const SystemParams& params,
                                     Mobility mobility = Mobility::static_nodes);

/// Probability that at least one of tau_m slots succeeds. Throws NumericalError when
/// the inclusion-exclusion cannot be evaluated to full accuracy; use coverage_bracket then.
double coverage_probability(double distance, const SystemParams& params,
                            Mobility mobility = Mobility::static_nodes);

Bracket coverage_bracket(double distance, const SystemParams& params,
                         Mobility mobility = Mobility::static_nodes);

struct BonferroniBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Partial sums S_k (upper, k odd) and S_{k+1} (lower) of the inclusion-exclusion.
/// Requires odd k with 1 <= k <= tau_m.
BonferroniBounds bonferroni_bounds(double distance, const SystemParams& params, int k,
                                   Mobility mobility = Mobility::static_nodes);

struct ConditionalCoverage {
    double marginal1 = 0.0;   ///< p_n(y1)
    double marginal2 = 0.0;   ///< p_n(y2)
    double joint = 0.0;       ///< p_n(y1, y2)
    double conditional = 0.0; ///< p_n(y1 | y2)
    double ratio = 0.0;       ///< p_n(y1 | y2) / p_n(y1)
    double overlap = 0.0;     ///< int (1 - f1)(1 - f2) dx [m^2]
};

/// Two receivers at distances d1, d2 from the transmitter and `separation` apart,
/// both succeeding in n slots against the same interferers.
ConditionalCoverage conditional_coverage(double d1, double d2, double separation, int n,
                                         const SystemParams& params,
                                         const QuadratureConfig& cfg = {});

} // namespace mcd2d
