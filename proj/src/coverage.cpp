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


#include "mcd2d/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "mcd2d/error.hpp"
#include "mcd2d/special.hpp"

namespace mcd2d {

using std::numbers::pi;

double cached_k(double alpha, int n)
{
    static std::mutex mutex;
    static std::map<std::pair<double, int>, double> table;
    const auto key = std::make_pair(alpha, n);
    {
        std::lock_guard lock(mutex);
        if (auto it = table.find(key); it != table.end())
            return it->second;
    }
    const double value = k_integral(alpha, n, QuadratureConfig::precise());
    std::lock_guard lock(mutex);
    table.emplace(key, value);
    return value;
}

double effective_k(double alpha, int n, Mobility mobility)
{
    return mobility == Mobility::high ? n * cached_k(alpha, 1) : cached_k(alpha, n);
}

namespace {

void check_distance(double d, const char* what)
{
    if (!(d >= 0.0) || !std::isfinite(d))
        throw ConfigError(std::string(what) + ": distance must be finite and nonnegative");
}

} // namespace

double p_n_single(double distance, int n, const SystemParams& params, Mobility mobility)
{
    params.validate();
    check_distance(distance, "p_n_single");
    if (n < 1)
        throw ConfigError("p_n_single: n must be at least 1");
    const double noise = n * params.threshold * params.snr_inv() *
                         params.pathloss_intercept * std::pow(distance, params.alpha);
    const double interference = params.lambda_m * effective_k(params.alpha, n, mobility) *
                                std::pow(params.threshold, 2.0 / params.alpha) * distance *
                                distance;
    return std::exp(-noise - interference);
}

double p_n_single_general(double distance, int n, const SystemParams& params,
                          const std::function<double(double)>& attenuation,
                          const QuadratureConfig& cfg)
{
    params.validate();
    cfg.validate();
    check_distance(distance, "p_n_single_general");
    if (n < 1)
        throw ConfigError("p_n_single_general: n must be at least 1");
    if (distance == 0.0)
        return 1.0;
    const double ld = attenuation(distance);
    if (!(ld > 0.0) || !std::isfinite(ld))
        throw ConfigError("p_n_single_general: attenuation must be positive and finite");
    const double t = params.threshold;
    const double nn = n;
    auto integrand = [&](double r) {
        const double lr = attenuation(r);
        if (!(lr > 0.0))
            return r;
        return r * -std::expm1(-nn * std::log1p(t * ld / lr));
    };
    const double inner = quad::finite(integrand, 0.0, distance, cfg, "p_n_single_general");
    const double outer = quad::semi_infinite(integrand, distance, cfg, "p_n_single_general");
    const double noise = nn * t * params.snr_inv() * ld;
    return std::exp(-noise - 2.0 * pi * params.lambda_m * (inner + outer));
}

std::vector<double> coverage_moments(double distance, int count, const SystemParams& params,
                                     Mobility mobility)
{
    std::vector<double> m;
    m.reserve(std::max(count, 0));
    for (int n = 1; n <= count; ++n)
        m.push_back(p_n_single(distance, n, params, mobility));
    return m;
}

Bracket coverage_bracket(double distance, const SystemParams& params, Mobility mobility)
{
    const int tau = params.tau_m;
    const double p1 = p_n_single(distance, 1, params, mobility);
    // 1 - (1 - p_1)^tau
    const double jensen = -std::expm1(tau * std::log1p(-p1));
    if (mobility == Mobility::high)
        return {jensen, jensen, true};
    const auto m = coverage_moments(distance, std::min(tau, kMaxExactRepetitions), params, mobility);
    return alternating_bracket(tau, m, jensen, 1.0);
}

double coverage_probability(double distance, const SystemParams& params, Mobility mobility)
{
    const Bracket b = coverage_bracket(distance, params, mobility);
    if (!b.exact)
        throw NumericalError("coverage_probability: inclusion-exclusion over tau_m = " +
                             std::to_string(params.tau_m) +
                             " loses precision; value lies in [" + std::to_string(b.lower) +
                             ", " + std::to_string(b.upper) + "]");
    return b.lower;
}

BonferroniBounds bonferroni_bounds(double distance, const SystemParams& params, int k,
                                   Mobility mobility)
{
    if (k < 1 || k > params.tau_m || k % 2 == 0)
        throw ConfigError("bonferroni_bounds: k must be odd with 1 <= k <= tau_m");
    const int terms = std::min(k + 1, params.tau_m);
    const auto m = coverage_moments(distance, terms, params, mobility);
    const double upper = alternating_binomial_sum(params.tau_m, m, k).value;
    const double lower = alternating_binomial_sum(params.tau_m, m, terms).value;
    return {lower, upper};
}

ConditionalCoverage conditional_coverage(double d1, double d2, double separation, int n,
                                         const SystemParams& params, const QuadratureConfig& cfg)
{
    params.validate();
    cfg.validate();
    check_distance(d1, "conditional_coverage");
    check_distance(d2, "conditional_coverage");
    check_distance(separation, "conditional_coverage");
    if (n < 1)
        throw ConfigError("conditional_coverage: n must be at least 1");
    const double slack = 1e-12 * std::max({d1, d2, separation, 1.0});
    if (separation < std::abs(d1 - d2) - slack || separation > d1 + d2 + slack)
        throw ConfigError("conditional_coverage: no receiver pair has these distances");

    ConditionalCoverage out;
    out.marginal1 = p_n_single(d1, n, params);
    out.marginal2 = p_n_single(d2, n, params);
    if (separation == 0.0) {
        // one receiver: success at y2 is success at y1
        out.joint = out.marginal1;
        out.conditional = 1.0;
        out.ratio = 1.0 / out.marginal1;
        out.overlap = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // y2 on the positive x axis, y1 in the upper half-plane
    const double cos_theta =
        (d1 > 0.0 && d2 > 0.0)
            ? std::clamp((d1 * d1 + d2 * d2 - separation * separation) / (2.0 * d1 * d2), -1.0,
                         1.0)
            : 1.0;
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double y1x = d1 * cos_theta, y1y = d1 * sin_theta;
    const double y2x = d2, y2y = 0.0;
    const double cx = 0.5 * (y1x + y2x), cy = 0.5 * (y1y + y2y);

    const double t = params.threshold, alpha = params.alpha, nn = n;
    auto one_minus_f = [&](double dist, double dx, double dy) {
        const double rho = std::hypot(dx, dy);
        if (dist == 0.0)
            return 0.0;
        return -std::expm1(-nn * std::log1p(t * std::pow(dist / rho, alpha)));
    };
    auto point = [&](double rho, double phi) {
        const double x = cx + rho * std::cos(phi), y = cy + rho * std::sin(phi);
        return one_minus_f(d1, x - y1x, y - y1y) * one_minus_f(d2, x - y2x, y - y2y);
    };
    QuadratureConfig inner_cfg = cfg;
    inner_cfg.abs_tol = cfg.abs_tol * 1e-3;
    inner_cfg.rel_tol = cfg.rel_tol * 0.1;
    auto ring = [&](double rho) {
        if (rho == 0.0)
            return 0.0;
        auto f = [&](double phi) { return point(rho, phi); };
        return rho * quad::finite(f, 0.0, 2.0 * pi, inner_cfg, "conditional_coverage");
    };
    const double half = 0.5 * separation;
    const double reach = half + 4.0 * std::max(d1, d2) * std::max(1.0, std::pow(t, 1.0 / alpha));
    const double overlap = quad::finite(ring, 0.0, half, cfg, "conditional_coverage") +
                           quad::finite(ring, half, reach, cfg, "conditional_coverage") +
                           quad::semi_infinite(ring, reach, cfg, "conditional_coverage");

    out.overlap = overlap;
    out.ratio = std::exp(params.lambda_m * overlap);
    out.conditional = out.marginal1 * out.ratio;
    out.joint = out.conditional * out.marginal2;
    return out;
}

} // namespace mcd2d
