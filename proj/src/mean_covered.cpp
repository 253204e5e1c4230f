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


#include "mcd2d/mean_covered.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "mcd2d/error.hpp"
#include "mcd2d/special.hpp"

namespace mcd2d {

using std::numbers::pi;

namespace {

double noise_scale(const SystemParams& p)
{
    return p.threshold * p.snr_inv() * p.pathloss_intercept;
}

double interference_scale(const SystemParams& p, int n, Mobility mobility)
{
    return p.lambda_m * effective_k(p.alpha, n, mobility) * std::pow(p.threshold, 2.0 / p.alpha);
}

double certified_sum(int tau, const std::vector<double>& moments, const char* what)
{
    if (tau > kMaxExactRepetitions)
        throw NumericalError(std::string(what) + ": tau_m above " +
                             std::to_string(kMaxExactRepetitions) + " cannot be summed exactly");
    const auto s = alternating_binomial_sum(tau, moments, tau);
    if (!s.significant)
        throw NumericalError(std::string(what) + ": inclusion-exclusion loses precision");
    return s.value;
}

// pi lambda_r int_0^{R^2} (1 - (1 - p_1(sqrt u))^tau) du
double one_slot_union(const SystemParams& p, Mobility mobility)
{
    const double a = noise_scale(p);
    const double c = interference_scale(p, 1, mobility);
    const double half_alpha = 0.5 * p.alpha;
    const int tau = p.tau_m;
    auto f = [=](double u) {
        const double p1 = std::exp(-a * std::pow(u, half_alpha) - c * u);
        return -std::expm1(tau * std::log1p(-p1));
    };
    const double r2 = p.cluster_radius * p.cluster_radius;
    return pi * p.lambda_r *
           quad::finite_singular(f, 0.0, r2, QuadratureConfig::precise(), "mean_covered");
}

} // namespace

std::vector<double> mean_covered_moments(const SystemParams& params, int count, Mobility mobility)
{
    params.validate();
    const double r2 = params.cluster_radius * params.cluster_radius;
    const double a = noise_scale(params);
    const double half_alpha = 0.5 * params.alpha;
    std::vector<double> m;
    m.reserve(std::max(count, 0));
    for (int n = 1; n <= count; ++n) {
        const double na = n * a;
        const double c = interference_scale(params, n, mobility);
        // r dr = du / 2 with u = r^2
        auto f = [=](double u) { return std::exp(-na * std::pow(u, half_alpha) - c * u); };
        m.push_back(pi * params.lambda_r *
                    quad::finite_singular(f, 0.0, r2, QuadratureConfig::precise(),
                                          "mean_covered_moments"));
    }
    return m;
}

Bracket mean_covered_bracket(const SystemParams& params, Mobility mobility)
{
    params.validate();
    const double jensen = one_slot_union(params, mobility);
    if (mobility == Mobility::high)
        return {jensen, jensen, true};
    const int tau = params.tau_m;
    const auto m = mean_covered_moments(params, std::min(tau, kMaxExactRepetitions), mobility);
    return alternating_bracket(tau, m, jensen, params.n_max());
}

double mean_covered(const SystemParams& params, Mobility mobility)
{
    const Bracket b = mean_covered_bracket(params, mobility);
    if (!b.exact)
        throw NumericalError("mean_covered: inclusion-exclusion over tau_m = " +
                             std::to_string(params.tau_m) + " loses precision; value lies in [" +
                             std::to_string(b.lower) + ", " + std::to_string(b.upper) + "]");
    return b.lower;
}

double mean_covered_q_form(const SystemParams& params)
{
    params.validate();
    if (params.alpha != 4.0)
        throw ConfigError("mean_covered_q_form: requires alpha = 4");
    if (!(params.noise_power > 0.0))
        throw ConfigError("mean_covered_q_form: requires positive noise; use the no-noise form");
    const double r2 = params.cluster_radius * params.cluster_radius;
    const double a = noise_scale(params);
    std::vector<double> m;
    for (int n = 1; n <= std::min(params.tau_m, kMaxExactRepetitions); ++n) {
        const double c1 = n * a;
        const double c2 = interference_scale(params, n, Mobility::static_nodes);
        const double lo = c2 / std::sqrt(2.0 * c1);
        const double hi = std::sqrt(2.0 * c1) * r2 + lo;
        // e^{lo^2/2} (Q(lo) - Q(hi)) without forming either exponential
        const double tail = scaled_q(lo) - std::exp(0.5 * (lo - hi) * (lo + hi)) * scaled_q(hi);
        m.push_back(std::pow(pi, 1.5) * params.lambda_r / std::sqrt(c1) * tail);
    }
    return certified_sum(params.tau_m, m, "mean_covered_q_form");
}

double mean_covered_no_noise(const SystemParams& params)
{
    params.validate();
    const double r2 = params.cluster_radius * params.cluster_radius;
    std::vector<double> m;
    for (int n = 1; n <= std::min(params.tau_m, kMaxExactRepetitions); ++n) {
        const double c = interference_scale(params, n, Mobility::static_nodes);
        m.push_back(pi * params.lambda_r * -std::expm1(-c * r2) / c);
    }
    return certified_sum(params.tau_m, m, "mean_covered_no_noise");
}

double mean_covered_asymptotic(const SystemParams& params, AsymptoticRegime regime)
{
    params.validate();
    const int tau = params.tau_m;
    if (regime == AsymptoticRegime::dense) {
        std::vector<double> inv_k;
        for (int n = 1; n <= std::min(tau, kMaxExactRepetitions); ++n)
            inv_k.push_back(1.0 / cached_k(params.alpha, n));
        const double k_tilde = certified_sum(tau, inv_k, "mean_covered_asymptotic");
        return pi * k_tilde * params.lambda_r /
               (std::pow(params.threshold, 2.0 / params.alpha) * params.lambda_m);
    }
    const double a = noise_scale(params);
    if (a == 0.0)
        return params.n_max();
    const double half_alpha = 0.5 * params.alpha;
    auto f = [=](double u) {
        const double p1 = std::exp(-a * std::pow(u, half_alpha));
        return -std::expm1(tau * std::log1p(-p1));
    };
    const double r2 = params.cluster_radius * params.cluster_radius;
    return pi * params.lambda_r *
           quad::finite_singular(f, 0.0, r2, QuadratureConfig::precise(),
                                 "mean_covered_asymptotic");
}

double threshold_distance(const SystemParams& params)
{
    params.validate();
    const double s = params.threshold * params.snr_inv();
    if (s == 0.0)
        return std::numeric_limits<double>::infinity();
    return params.path_loss().inverse(1.0 / s);
}

NullClusterFraction null_cluster_fraction(const SystemParams& params)
{
    NullClusterFraction out;
    out.threshold_distance = threshold_distance(params);
    out.effective_radius = std::min(params.cluster_radius, out.threshold_distance);
    out.fraction =
        std::exp(-params.lambda_r * pi * out.effective_radius * out.effective_radius);
    return out;
}

double throughput(const SystemParams& params, Mobility mobility)
{
    return mean_covered(params, mobility) * std::log1p(params.threshold) / params.tau_m;
}

double optimal_rate_asymptotic(double alpha)
{
    if (!(alpha > 2.0))
        throw ConfigError("optimal_rate_asymptotic: requires alpha > 2");
    const double delta = 2.0 / alpha;
    auto g = [=](double x) { return x / (1.0 + x) - delta * std::log1p(x); };
    const double lo = 0.5 * alpha - 1.0;
    double hi = std::max(2.0 * lo, 1.0);
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e300)
            throw NumericalError("optimal_rate_asymptotic: no sign change");
    }
    std::uintmax_t iterations = 200;
    const auto root = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iterations);
    const double x = 0.5 * (root.first + root.second);
    if (std::abs(g(x)) > 1e-10)
        throw NumericalError("optimal_rate_asymptotic: root residual exceeds 1e-10");
    return x;
}

RateOptimum optimal_rate_general(const SystemParams& params, double lo_db, double hi_db,
                                 int grid_points)
{
    params.validate();
    if (!(hi_db > lo_db) || grid_points < 3)
        throw ConfigError("optimal_rate_general: need lo_db < hi_db and at least 3 grid points");
    auto objective_db = [&](double db) {
        SystemParams p = params;
        p.threshold = db_to_linear(db);
        return throughput(p);
    };
    const double step = (hi_db - lo_db) / (grid_points - 1);
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < grid_points; ++i) {
        const double v = objective_db(lo_db + i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo_db + std::max(best - 1, 0) * step;
    const double b = lo_db + std::min(best + 1, grid_points - 1) * step;
    std::uintmax_t iterations = 200;
    const auto m = boost::math::tools::brent_find_minima(
        [&](double db) { return -objective_db(db); }, a, b, 40, iterations);

    RateOptimum out;
    out.threshold = db_to_linear(m.first);
    out.throughput = -m.second;
    out.at_boundary = best == 0 || best == grid_points - 1;
    const double h = 0.05;
    const double curvature =
        (objective_db(m.first + h) + objective_db(m.first - h) - 2.0 * out.throughput) /
        (h * h * out.throughput);
    out.flat = !(std::abs(curvature) > 1e-6);
    return out;
}

double unicast_baseline(const SystemParams& params, bool conditional_on_nonempty)
{
    const double n_max = params.n_max();
    // average of p(y) over the disc
    const double p_bar = mean_covered(params) / n_max;
    const double occupied = conditional_on_nonempty ? 1.0 : -std::expm1(-n_max);
    return occupied * params.tau_m * p_bar * std::log1p(params.threshold);
}

MobilityComparison mobility_variant(MobilityOp op, const SystemParams& params, double distance,
                                    int n)
{
    auto eval = [&](Mobility m) {
        switch (op) {
        case MobilityOp::p_n_single:
            return p_n_single(distance, n, params, m);
        case MobilityOp::coverage_probability:
            return coverage_probability(distance, params, m);
        case MobilityOp::mean_covered:
            return mean_covered(params, m);
        }
        throw ConfigError("mobility_variant: unknown operation");
    };
    return {eval(Mobility::static_nodes), eval(Mobility::high)};
}

} // namespace mcd2d
