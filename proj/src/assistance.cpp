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


#include "mcd2d/assistance.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "mcd2d/coverage.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/mean_covered.hpp"
#include "mcd2d/rng.hpp"
#include "mcd2d/special.hpp"

namespace mcd2d {

using std::numbers::pi;

namespace {

double downlink_h(const SystemParams& p) { return h_integral(p.threshold, p.alpha); }

} // namespace

double assist_link_probability(double r, const SystemParams& params)
{
    params.validate();
    if (!(r >= 0.0))
        throw ConfigError("assist_link_probability: r must be nonnegative");
    const double h = downlink_h(params);
    return std::exp(-params.threshold * params.snr_c_inv() * params.pathloss_intercept *
                        std::pow(r, params.alpha) -
                    2.0 * pi * params.lambda_b * h * r * r);
}

double bs_coverage_pc(const SystemParams& params, const QuadratureConfig& cfg)
{
    params.validate();
    cfg.validate();
    const double h = downlink_h(params);
    const double c3 = params.threshold * params.snr_c_inv() * params.pathloss_intercept;
    const double scale = 1.0 / (pi * params.lambda_b);
    const double half_alpha = 0.5 * params.alpha;
    // u = pi lambda_b r^2
    auto f = [=](double u) {
        return std::exp(-c3 * std::pow(u * scale, half_alpha) - (2.0 * h + 1.0) * u);
    };
    return quad::semi_infinite(f, 0.0, cfg, "bs_coverage_pc");
}

double bs_coverage_pc_q_form(const SystemParams& params)
{
    params.validate();
    if (params.alpha != 4.0)
        throw ConfigError("bs_coverage_pc_q_form: requires alpha = 4");
    if (!(params.noise_power > 0.0))
        throw ConfigError("bs_coverage_pc_q_form: requires positive noise; use the no-noise form");
    const double h = downlink_h(params);
    const double c3 = params.pathloss_intercept * params.threshold * params.snr_c_inv();
    const double c4 = 2.0 * pi * params.lambda_b * h + pi * params.lambda_b;
    return std::pow(pi, 1.5) * params.lambda_b / std::sqrt(c3) *
           scaled_q(c4 / std::sqrt(2.0 * c3));
}

double bs_coverage_pc_no_noise(const SystemParams& params)
{
    params.validate();
    return 1.0 / (1.0 + 2.0 * downlink_h(params));
}

double bs_coverage_given_bs(const Point& receiver, const Point& bs, const SystemParams& params,
                            const QuadratureConfig& cfg)
{
    params.validate();
    cfg.validate();
    const double r = bs.norm();
    if (!(r > 0.0))
        throw ConfigError("bs_coverage_given_bs: serving BS must not sit at the transmitter");
    const double s = (bs - receiver).norm();
    if (s == 0.0)
        return 1.0;
    const double t = params.threshold, alpha = params.alpha;
    const double yx = receiver.x(), yy = receiver.y();
    QuadratureConfig inner_cfg = cfg;
    inner_cfg.abs_tol = cfg.abs_tol * 1e-3;
    inner_cfg.rel_tol = cfg.rel_tol * 0.1;
    // angular peak sits at the receiver's bearing; start the period there
    const double phi_y = std::atan2(yy, yx);
    auto ring = [&](double rho) {
        auto f = [&](double phi) {
            const double dist = std::hypot(rho * std::cos(phi) - yx, rho * std::sin(phi) - yy);
            return t / (t + std::pow(dist / s, alpha));
        };
        return quad::finite(f, phi_y, phi_y + pi, inner_cfg, "bs_coverage_given_bs") +
               quad::finite(f, phi_y + pi, phi_y + 2.0 * pi, inner_cfg, "bs_coverage_given_bs");
    };
    // rho = r w^{-1/(alpha-2)} maps [r, inf) onto (0, 1] with a bounded integrand
    const double e = 1.0 / (alpha - 2.0);
    auto outer = [&](double w) {
        const double rho = r * std::pow(w, -e);
        const double ang = ring(rho);
        if (ang == 0.0)
            return 0.0;
        return rho * ang * r * e * std::pow(w, -e - 1.0);
    };
    // radial breaks around the receiver when it lies outside B(0, r)
    std::vector<double> breaks{0.0};
    const double ry = receiver.norm(), width = s * std::max(1.0, std::pow(t, 1.0 / alpha));
    for (double rho : {ry + width, ry, ry - width})
        if (rho > 1.01 * r)
            breaks.push_back(std::pow(r / rho, alpha - 2.0));
    breaks.push_back(1.0);
    double exclusion = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        exclusion += quad::finite(outer, breaks[i], breaks[i + 1], cfg, "bs_coverage_given_bs");
    return std::exp(-t * params.snr_c_inv() * params.pathloss_intercept * std::pow(s, alpha) -
                    params.lambda_b * exclusion);
}

ExactBsCoverage bs_coverage_exact(const Point& receiver_offset, const SystemParams& params,
                                  int samples, std::uint64_t seed)
{
    params.validate();
    if (samples < 2)
        throw ConfigError("bs_coverage_exact: at least 2 samples required");
    const double pc = bs_coverage_pc(params);
    std::vector<double> diff(samples);
    for (int i = 0; i < samples; ++i) {
        Substream rng(seed, static_cast<std::uint32_t>(i), stream_tag(StreamPurpose::bs_location),
                      0);
        // nearest-BS distance is Rayleigh with pi lambda_b r^2 ~ Exp(1)
        const double r = std::sqrt(rng.exponential() / (pi * params.lambda_b));
        const double phi = 2.0 * pi * rng.uniform();
        const Point bs{r * std::cos(phi), r * std::sin(phi)};
        diff[i] = bs_coverage_given_bs(receiver_offset, bs, params) -
                  assist_link_probability(r, params);
    }
    double mean = 0.0;
    for (double d : diff)
        mean += d;
    mean /= samples;
    double var = 0.0;
    for (double d : diff)
        var += (d - mean) * (d - mean);
    var /= samples - 1;

    ExactBsCoverage out;
    out.value = pc + mean;
    out.std_error = std::sqrt(var / samples);
    out.approximation_gap = mean;
    out.samples = samples;
    return out;
}

double assisted_coverage(double p, double pc)
{
    if (!(p >= 0.0 && p <= 1.0) || !(pc >= 0.0 && pc <= 1.0))
        throw ConfigError("assisted_coverage: probabilities must lie in [0, 1]");
    return 1.0 - (1.0 - pc) * (1.0 - p);
}

double assisted_coverage(double distance, const SystemParams& params)
{
    return assisted_coverage(coverage_probability(distance, params), bs_coverage_pc(params));
}

double assisted_mean_covered(const SystemParams& params)
{
    const double n = mean_covered(params);
    return n + bs_coverage_pc(params) * (params.n_max() - n);
}

double assisted_mean_covered_given_bs(const SystemParams& params, double r)
{
    const double n = mean_covered(params);
    return n + assist_link_probability(r, params) * (params.n_max() - n);
}

} // namespace mcd2d
