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

#include "mcd2d/channel.hpp"

#include <cmath>

#include "mcd2d/error.hpp"

namespace mcd2d {

double path_loss(double r, const PathLossModel& model) { return model(r); }

double path_loss_inverse(double attenuation, const PathLossModel& model)
{
    return model.inverse(attenuation);
}

double sinr(double link_fading, double signal_distance, std::span<const InterfererTerm> interferers,
            double snr_inv, const PathLossModel& model)
{
    if (!(signal_distance > 0.0))
        throw ConfigError("sinr: signal distance must be positive");
    double interference = 0.0;
    for (const auto& term : interferers)
        interference += term.fading / model(term.distance);
    return (link_fading / model(signal_distance)) / (snr_inv + interference);
}

} // namespace mcd2d
