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

#include "mcd2d/alternating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>

#include "mcd2d/error.hpp"

namespace mcd2d {

AlternatingSum alternating_binomial_sum(int tau, std::span<const double> moments, int terms)
{
    if (terms < 1 || terms > tau || static_cast<std::size_t>(terms) > moments.size())
        throw ConfigError("alternating_binomial_sum: bad term count");
    // Neumaier summation
    double sum = 0.0, compensation = 0.0, magnitude = 0.0;
    for (int n = 1; n <= terms; ++n) {
        const double coeff = boost::math::binomial_coefficient<double>(tau, n);
        const double term = (n % 2 == 1 ? 1.0 : -1.0) * coeff * moments[n - 1];
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            compensation += (sum - t) + term;
        else
            compensation += (term - t) + sum;
        sum = t;
        magnitude += std::abs(term);
    }
    AlternatingSum out;
    out.value = sum + compensation;
    out.magnitude = magnitude;
    out.significant = std::isfinite(out.value) && magnitude <= kCancellationLimit * std::abs(out.value);
    return out;
}

Bracket alternating_bracket(int tau, std::span<const double> moments, double jensen_upper,
                            double ceiling)
{
    if (tau < 1)
        throw ConfigError("alternating_bracket: tau must be >= 1");
    const int available = std::min(tau, kMaxExactRepetitions);
    if (moments.size() < static_cast<std::size_t>(available))
        throw ConfigError("alternating_bracket: not enough moments");

    if (tau <= kMaxExactRepetitions) {
        const auto full = alternating_binomial_sum(tau, moments, tau);
        if (full.significant)
            return {full.value, full.value, true};
    }

    // m_1 is the value at a single repetition, a floor for every tau.
    double lower = moments[0];
    double upper = std::min(ceiling, jensen_upper);

    // Rounding bound of a compensated sum whose summands carry a few ulps each.
    auto slack = [](const AlternatingSum& a) {
        return 4.0 * std::numeric_limits<double>::epsilon() * a.magnitude;
    };

    // Bonferroni: odd partial sums bound from above, even ones from below.
    for (int k = 1; k <= available; ++k) {
        if (k == tau)
            break;
        const auto partial = alternating_binomial_sum(tau, moments, k);
        if (!partial.significant)
            continue;
        if (k % 2 == 1)
            upper = std::min(upper, partial.value + slack(partial));
        else
            lower = std::max(lower, partial.value - slack(partial));
    }

    // Values at smaller tau. Increments d_t = v(t) - v(t-1) = E[X (1 - X)^{t-1}] are
    // nonincreasing and log-convex in t, so from the last certified t0 the increments
    // beyond are at most d_{t0} and at least d_{t0} r^{t - t0}, r = d_{t0} / d_{t0 - 1}.
    const int known = std::min(tau - 1, kMaxExactRepetitions);
    std::vector<double> value(known + 1, 0.0), err(known + 1, 0.0);
    std::vector<bool> ok(known + 1, false);
    ok[0] = true;
    for (int t = 1; t <= known; ++t) {
        const auto s = alternating_binomial_sum(t, moments, t);
        value[t] = s.value;
        err[t] = slack(s);
        ok[t] = s.significant;
    }
    for (int t0 = known; t0 >= 1; --t0) {
        if (!ok[t0] || !ok[t0 - 1])
            continue;
        const double steps = tau - t0;
        const double spread = err[t0] + err[t0 - 1];
        const double d_hi = std::max(0.0, value[t0] - value[t0 - 1] + spread);
        const double d_lo = value[t0] - value[t0 - 1] - spread;
        lower = std::max(lower, value[t0] - err[t0]);
        upper = std::min(upper, value[t0] + err[t0] + steps * d_hi);
        if (t0 >= 2 && ok[t0 - 2]) {
            const double prev = value[t0 - 1] - value[t0 - 2] + err[t0 - 1] + err[t0 - 2];
            if (prev > 0.0 && d_lo > 0.0) {
                const double r = std::min(1.0, d_lo / prev);
                const double tail = r < 1.0 ? d_lo * r * -std::expm1(steps * std::log(r)) / (1.0 - r)
                                            : d_lo * steps;
                lower = std::max(lower, value[t0] - err[t0] + tail);
            }
        }
        break;
    }
    if (lower > upper)
        lower = upper;
    return {lower, upper, false};
}

} // namespace mcd2d
