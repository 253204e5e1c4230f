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

#include "mcd2d/special.hpp"

#include <cmath>
#include <numbers>

namespace mcd2d {

double k_integral(double alpha, int n, const QuadratureConfig& cfg)
{
    if (!(alpha > 2.0) || n < 1)
        throw ConfigError("k_integral: requires alpha > 2 and n >= 1");
    cfg.validate();
    const double delta = 2.0 / alpha;
    const double nn = n;
    // (1 - (1+t)^{-n}) / t, finite at t = 0
    auto ratio = [=](double t) { return t > 0.0 ? -std::expm1(-nn * std::log1p(t)) / t : nn; };
    // pow(t, -delta) stays finite down to the smallest subnormal
    auto head_integrand = [=](double t) { return std::pow(t, -delta) * ratio(t); };
    // t = w^{-1/delta} maps [1, inf) onto (0, 1]
    auto tail_integrand = [=](double w) {
        return -std::expm1(-nn * std::log1p(std::pow(w, -1.0 / delta))) / delta;
    };
    const double head = quad::finite_singular(head_integrand, 0.0, 1.0, cfg, "k_integral");
    const double tail = quad::finite_singular(tail_integrand, 0.0, 1.0, cfg, "k_integral");
    return 2.0 * std::numbers::pi / alpha * (head + tail);
}

double h_integral(double threshold, double alpha, const QuadratureConfig& cfg)
{
    if (!(threshold > 0.0) || !(alpha > 2.0))
        throw ConfigError("h_integral: requires T > 0 and alpha > 2");
    cfg.validate();
    auto integrand = [=](double x) { return x / (1.0 + std::pow(x, alpha) / threshold); };
    return quad::semi_infinite(integrand, 1.0, cfg, "h_integral");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double scaled_q(double x)
{
    if (x < 20.0)
        return std::exp(0.5 * x * x) * q_function(x);
    // Mills ratio continued fraction 1/(x+1/(x+2/(x+3/(x+...)))), evaluated bottom-up.
    double tail = x;
    for (int k = 60; k >= 1; --k)
        tail = x + k / tail;
    return 1.0 / (tail * std::sqrt(2.0 * std::numbers::pi));
}

} // namespace mcd2d
