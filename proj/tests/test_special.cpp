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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mcd2d/alternating.hpp"
#include "mcd2d/error.hpp"
#include "mcd2d/special.hpp"

using namespace mcd2d;
using std::numbers::pi;

namespace {

// Beta-function form: pi Gamma(1 - d) Gamma(n + d) / Gamma(n), d = 2 / alpha.
double k_gamma_form(double alpha, int n)
{
    const double d = 2.0 / alpha;
    return pi * std::exp(std::lgamma(1.0 - d) + std::lgamma(n + d) - std::lgamma(double(n)));
}

// Substituting x^2 = T y gives a closed form at alpha = 4.
double h_alpha4(double t)
{
    return 0.5 * std::sqrt(t) * (pi / 2.0 - std::atan(1.0 / std::sqrt(t)));
}

} // namespace

TEST_CASE("interference integral at n = 1")
{
    CHECK(k_integral(4.0, 1) == doctest::Approx(pi * pi / 2.0).epsilon(1e-9));
    CHECK(k_integral(3.5, 1) == doctest::Approx(5.785).epsilon(1e-3));
    for (double a : {2.5, 3.0, 3.5, 4.0, 5.0, 6.0})
        CHECK(k_integral(a, 1) ==
              doctest::Approx(2.0 * pi * pi / (a * std::sin(2.0 * pi / a))).epsilon(1e-9));
}

TEST_CASE("interference integral against the gamma form")
{
    for (double a : {2.2, 3.0, 3.5, 4.0, 6.0})
        for (int n : {1, 2, 3, 5, 8, 17, 32})
            CHECK(k_integral(a, n, QuadratureConfig::precise()) ==
                  doctest::Approx(k_gamma_form(a, n)).epsilon(1e-12));
}

TEST_CASE("interference integral grows with n")
{
    double prev = 0.0;
    for (int n = 1; n <= 40; ++n) {
        const double k = k_integral(3.5, n);
        CHECK(k > prev);
        prev = k;
    }
}

TEST_CASE("downlink integral")
{
    CHECK(h_integral(1.0, 4.0) == doctest::Approx(pi / 8.0).epsilon(1e-9));
    CHECK(h_integral(4.0, 4.0) == doctest::Approx(1.1071).epsilon(1e-4));
    for (double t : {0.01, 0.5, 1.0, 3.0, 100.0})
        CHECK(h_integral(t, 4.0, QuadratureConfig::precise()) ==
              doctest::Approx(h_alpha4(t)).epsilon(1e-12));
}

TEST_CASE("downlink integral is increasing in T")
{
    double prev = 0.0;
    for (double t = 0.05; t < 50.0; t *= 1.7) {
        const double h = h_integral(t, 3.5);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("invalid arguments to the special integrals")
{
    CHECK_THROWS_AS(k_integral(2.0, 1), ConfigError);
    CHECK_THROWS_AS(k_integral(3.5, 0), ConfigError);
    CHECK_THROWS_AS(h_integral(0.0, 4.0), ConfigError);
    CHECK_THROWS_AS(h_integral(1.0, 1.5), ConfigError);
    QuadratureConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(k_integral(3.5, 1, bad), ConfigError);
}

TEST_CASE("scaled Gaussian tail")
{
    for (double x : {0.0, 0.3, 1.0, 5.0, 12.0, 19.9, 20.0, 25.0, 30.0})
        CHECK(scaled_q(x) == doctest::Approx(std::exp(0.5 * x * x) * q_function(x)).epsilon(1e-11));
    // x Q(x) e^{x^2/2} sqrt(2 pi) -> 1 with correction 1 - 1/x^2 + 3/x^4
    for (double x : {100.0, 1e3, 1e6}) {
        const double mills = scaled_q(x) * x * std::sqrt(2.0 * pi);
        const double series = 1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6);
        CHECK(mills == doctest::Approx(series).epsilon(1e-10));
    }
    CHECK(q_function(0.0) == doctest::Approx(0.5));
}

TEST_CASE("alternating sum of a binomial law is exact")
{
    // m_n = x^n gives 1 - (1 - x)^tau
    for (double x : {0.05, 0.3, 0.9})
        for (int tau : {1, 2, 5, 12, 24}) {
            std::vector<double> m;
            for (int n = 1; n <= tau; ++n)
                m.push_back(std::pow(x, n));
            const auto s = alternating_binomial_sum(tau, m, tau);
            const double truth = 1.0 - std::pow(1.0 - x, tau);
            const double magnitude = std::pow(1.0 + x, tau) - 1.0;
            CHECK(s.magnitude == doctest::Approx(magnitude).epsilon(1e-12));
            CHECK(s.significant == (magnitude <= kCancellationLimit * truth));
            CHECK(s.value == doctest::Approx(truth).epsilon(1e-12 * magnitude / truth));
        }
}

TEST_CASE("bracket falls back when cancellation is severe")
{
    // Nearly degenerate moments: every term near 1, result near 1 - tiny.
    const int tau = 64;
    const double x = 0.999;
    std::vector<double> m;
    for (int n = 1; n <= kMaxExactRepetitions; ++n)
        m.push_back(std::pow(x, n));
    const double truth = 1.0 - std::pow(1.0 - x, tau);
    const auto b = alternating_bracket(tau, m, truth, 1.0);
    CHECK_FALSE(b.exact);
    CHECK(b.lower <= truth + 1e-15);
    CHECK(b.upper >= truth - 1e-15);
    CHECK(b.lower <= b.upper);
}

TEST_CASE("bracket is exact for small tau")
{
    std::vector<double> m{0.4, 0.2, 0.1};
    const auto b = alternating_bracket(3, m, 1.0, 1.0);
    CHECK(b.exact);
    CHECK(b.lower == doctest::Approx(3 * 0.4 - 3 * 0.2 + 0.1));
    CHECK(b.width() == 0.0);
}
