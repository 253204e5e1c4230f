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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mcd2d/error.hpp"

namespace mcd2d {

/// Accuracy request shared by every integral in the analytic engine.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    unsigned max_subdivisions = 15;

    /// Tight setting used where results feed alternating binomial sums.
    static QuadratureConfig precise() { return {1e-15, 1e-13, 20}; }

    void validate() const
    {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
            throw ConfigError("quadrature tolerances must be positive and max_subdivisions >= 1");
    }
};

namespace quad {

namespace detail {

inline void check(double value, double error, double l1, const QuadratureConfig& cfg,
                  const char* what)
{
    if (!std::isfinite(value))
        throw NumericalError(std::string(what) + ": non-finite quadrature result");
    const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * l1);
    if (error > allowed)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, ": quadrature tolerance not met (error %.3e, allowed %.3e)",
                      error, allowed);
        throw NumericalError(std::string(what) + buf);
    }
}

/// Rule-level target; the acceptance check in `check` stays at cfg.rel_tol.
inline double request(const QuadratureConfig& cfg) { return std::max(0.1 * cfg.rel_tol, 1e-15); }

} // namespace detail

/// Adaptive Gauss-Kronrod on a finite interval with a smooth integrand.
template <class F>
double finite(F f, double a, double b, const QuadratureConfig& cfg, const char* what)
{
    if (a == b)
        return 0.0;
    double error = 0.0, l1 = 0.0, value = 0.0;
    try {
        value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, a, b, cfg.max_subdivisions, detail::request(cfg), &error, &l1);
    } catch (const std::exception& e) {
        throw NumericalError(std::string(what) + ": " + e.what());
    }
    detail::check(value, error, l1, cfg, what);
    return value;
}

/// Double-exponential rule on a finite interval; tolerates endpoint singularities.
template <class F>
double finite_singular(F f, double a, double b, const QuadratureConfig& cfg, const char* what)
{
    double error = 0.0, l1 = 0.0, value = 0.0;
    try {
        boost::math::quadrature::tanh_sinh<double> rule(cfg.max_subdivisions);
        value = rule.integrate(f, a, b, detail::request(cfg), &error, &l1);
    } catch (const std::exception& e) {
        throw NumericalError(std::string(what) + ": " + e.what());
    }
    detail::check(value, error, l1, cfg, what);
    return value;
}

/// Integral over [a, +inf) by the exp-sinh rule.
template <class F>
double semi_infinite(F f, double a, const QuadratureConfig& cfg, const char* what)
{
    double error = 0.0, l1 = 0.0, value = 0.0;
    try {
        boost::math::quadrature::exp_sinh<double> rule(std::min(cfg.max_subdivisions, 12u));
        value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), detail::request(cfg), &error,
                               &l1);
    } catch (const std::exception& e) {
        throw NumericalError(std::string(what) + ": " + e.what());
    }
    detail::check(value, error, l1, cfg, what);
    return value;
}

} // namespace quad
} // namespace mcd2d
