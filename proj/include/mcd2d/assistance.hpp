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

#include "mcd2d/channel.hpp"
#include "mcd2d/params.hpp"
#include "mcd2d/quadrature.hpp"

namespace mcd2d {

/// q(r): probability that the BS at distance r reaches the transmitter location.
double assist_link_probability(double r, const SystemParams& params);

/// p_c averaged over the nearest-BS distance, by quadrature.
double bs_coverage_pc(const SystemParams& params, const QuadratureConfig& cfg = {});

/// Gaussian-tail closed form of p_c. Requires alpha = 4 and positive noise.
double bs_coverage_pc_q_form(const SystemParams& params);

/// p_c without noise: 1 / (1 + 2 H(T, alpha)).
double bs_coverage_pc_no_noise(const SystemParams& params);

/// Probability that a receiver at `receiver` is covered by the serving BS at `bs`,
/// all other BSs lying outside B(0, |bs|).
double bs_coverage_given_bs(const Point& receiver, const Point& bs, const SystemParams& params,
                            const QuadratureConfig& cfg = {1e-10, 1e-7, 15});

struct ExactBsCoverage {
    double value = 0.0;
    double std_error = 0.0;
    double approximation_gap = 0.0; ///< value - bs_coverage_pc
    int samples = 0;
};

/// BS coverage of a receiver at `receiver_offset` from the transmitter, averaged over
/// the serving-BS location by Monte Carlo, with q(|x|) as control variate.
ExactBsCoverage bs_coverage_exact(const Point& receiver_offset, const SystemParams& params,
                                  int samples = 2000, std::uint64_t seed = 1);

/// p + p_c (1 - p).
double assisted_coverage(double p, double pc);

double assisted_coverage(double distance, const SystemParams& params);

double assisted_mean_covered(const SystemParams& params);

/// Assisted mean given the serving BS at distance r from the transmitter.
double assisted_mean_covered_given_bs(const SystemParams& params, double r);

} // namespace mcd2d
