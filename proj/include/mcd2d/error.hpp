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

#include <stdexcept>
#include <string>

namespace mcd2d {

/// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration, fixture, or argument outside its domain.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Quadrature did not converge, a root bracket failed, or an alternating
/// sum lost too many significant digits.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The optimizer could not satisfy the reliability target within its cap.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double best_achieved)
        : Error(what), best_achieved_(best_achieved) {}

    double best_achieved() const noexcept { return best_achieved_; }

private:
    double best_achieved_;
};

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
    success = 0,
    failure = 1,
    config_error = 2,
    numerical_failure = 3,
    infeasible = 4,
};

} // namespace mcd2d
