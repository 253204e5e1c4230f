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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mcd2d/params.hpp"

namespace mcd2d {

using Point = Eigen::Vector2d;

/// Attenuation A r^alpha; zero at r = 0.
double path_loss(double r, const PathLossModel& model);

/// Distance at which the attenuation equals `attenuation`.
double path_loss_inverse(double attenuation, const PathLossModel& model);

struct InterfererTerm {
    double fading;
    double distance;
};

/// (F0 / l(d0)) / (snr_inv + sum_j F_j / l(d_j)).
/// Throws ConfigError when the signal distance is not positive.
double sinr(double link_fading, double signal_distance, std::span<const InterfererTerm> interferers,
            double snr_inv, const PathLossModel& model);

/// One realization of the spatial model, seen from the typical transmitter.
struct NetworkSnapshot {
    std::vector<Point> bs_points;
    std::vector<Point> tx_points;                 ///< tx_points[0] is the origin
    std::vector<std::vector<Point>> receivers;    ///< receivers[i] belong to tx_points[i]
    double window_radius = 0.0;
};

} // namespace mcd2d
