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

#include "mcd2d/quadrature.hpp"

namespace mcd2d {

/// K(alpha, n) = (2 pi / alpha) int_0^inf t^{-2/alpha - 1} (1 - (1 + t)^{-n}) dt.
/// Governs the interference penalty on n consecutive D2D successes.
double k_integral(double alpha, int n, const QuadratureConfig& cfg = {});

/// H(T, alpha) = int_1^inf x / (1 + x^alpha / T) dx, the downlink interference integral.
double h_integral(double threshold, double alpha, const QuadratureConfig& cfg = {});

/// Gaussian tail Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

/// e^{x^2/2} Q(x), finite for all x >= 0 without overflow.
double scaled_q(double x);

} // namespace mcd2d
