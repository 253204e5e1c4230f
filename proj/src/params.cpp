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

#include "mcd2d/params.hpp"

#include <cstdint>
#include <cstring>
#include <string>

#include "mcd2d/error.hpp"

namespace mcd2d {

SystemParams SystemParams::table_one()
{
    const double unit = 1.0 / (std::numbers::pi * 500.0 * 500.0);
    SystemParams p;
    p.lambda_b = unit;
    p.lambda_m = 5.0 * unit;
    p.lambda_r = 500.0 * unit;
    p.cluster_radius = 150.0;
    p.threshold = db_to_linear(-3.0);
    p.tau_m = 1;
    p.alpha = 3.5;
    p.pathloss_intercept = 1.0;
    p.p_bs = 40.0;
    p.p_d2d = 0.2;
    p.noise_power = NoiseSpec{}.power_watts();
    p.eta = 0.95;
    p.budget = 2;
    return p;
}

void SystemParams::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(std::string("invalid system parameters: ") + what);
    };
    require(alpha > 2.0, "alpha must exceed 2");
    require(lambda_b > 0.0 && lambda_m > 0.0 && lambda_r > 0.0, "densities must be positive");
    require(cluster_radius > 0.0, "cluster_radius must be positive");
    require(threshold > 0.0, "threshold must be positive");
    require(tau_m >= 1, "tau_m must be at least 1");
    require(pathloss_intercept > 0.0, "pathloss_intercept must be positive");
    require(p_bs > 0.0 && p_d2d > 0.0, "transmit powers must be positive");
    require(noise_power >= 0.0, "noise_power must be nonnegative");
    require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0,1]");
    require(budget >= 0, "budget must be nonnegative");
}

unsigned long long params_hash(const SystemParams& p)
{
    // FNV-1a over the raw field bytes, field by field.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    for (double v : {p.lambda_b, p.lambda_m, p.lambda_r, p.cluster_radius, p.threshold, p.alpha,
                     p.pathloss_intercept, p.p_bs, p.p_d2d, p.noise_power, p.eta})
        mix(&v, sizeof v);
    mix(&p.tau_m, sizeof p.tau_m);
    mix(&p.budget, sizeof p.budget);
    return h;
}

} // namespace mcd2d
