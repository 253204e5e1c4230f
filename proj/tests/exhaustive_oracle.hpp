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

#include <cstddef>
#include <vector>

#include "mcd2d/optimizer.hpp"

namespace mcd2d::testing {

struct OracleSolution {
    bool feasible = false;
    int tau = 0;
    int assisted = 0;
};

/// Brute force over every tau up to the cap and every assistance subset within budget.
inline OracleSolution exhaustive_solve(const CellInstance& cell, int cap = kTauCap)
{
    const std::size_t m = cell.distances.size();
    if (m == 0)
        return {true, 1, 0};
    const AssistModel& model = *cell.model;
    for (int tau = 1; tau <= cap; ++tau) {
        int best = -1;
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            const int used = __builtin_popcount(mask);
            if (used > cell.budget || (best >= 0 && used >= best))
                continue;
            double total = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                total += model.h(cell.distances[i], tau, (mask >> i) & 1u);
            if (total / (static_cast<double>(m) * model.n_max()) >= cell.eta)
                best = used;
        }
        if (best >= 0)
            return {true, tau, best};
    }
    return {false, cap, 0};
}

} // namespace mcd2d::testing
