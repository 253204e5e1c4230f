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

namespace mcd2d {

/// Certified enclosure of a quantity; lower == upper when `exact`.
struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;

    double width() const { return upper - lower; }
    double midpoint() const { return 0.5 * (lower + upper); }
};

/// Result of sum_{n=1}^{terms} (-1)^{n+1} C(tau, n) m_n.
struct AlternatingSum {
    double value = 0.0;
    double magnitude = 0.0;   ///< sum of |summands|
    bool significant = false; ///< magnitude <= kCancellationLimit * |value|
};

inline constexpr int kMaxExactRepetitions = 32;
inline constexpr double kCancellationLimit = 1e6;

/// Inclusion-exclusion over tau repetitions with compensated summation.
/// `moments[n-1]` holds m_n; only the first `terms` are used.
AlternatingSum alternating_binomial_sum(int tau, std::span<const double> moments, int terms);

/// Exact value when tau <= kMaxExactRepetitions and the cancellation stays
/// under kCancellationLimit; otherwise the tightest enclosure available from
/// Bonferroni partial sums, the shape of the increments in tau, and the caller's
/// `jensen_upper` (E[1 - (1 - X)^tau] <= 1 - (1 - E X)^tau).
/// `moments` must hold m_1 .. m_{min(tau, kMaxExactRepetitions)}.
Bracket alternating_bracket(int tau, std::span<const double> moments, double jensen_upper,
                            double ceiling);

} // namespace mcd2d
