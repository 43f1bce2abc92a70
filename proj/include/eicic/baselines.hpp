// Copyright 2026 The eicic Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Comparison schemes: fixed ABS/bias pairs, the per-pico local heuristic, no
// eICIC and macro-only service.

#ifndef EICIC_BASELINES_HPP
#define EICIC_BASELINES_HPP

#include <vector>

#include "eicic/bias.hpp"
#include "eicic/inner_pf.hpp"
#include "eicic/model.hpp"

namespace eicic::baselines {

// Fills airtimes for a fixed association and fixed integer budgets with the
// proportional-fair split in every cell.
Allocation pf_allocation(const NetworkInstance& instance,
                         const std::vector<Association>& association,
                         const std::vector<int>& abs_pico,
                         const std::vector<int>& nonabs_macro);

// Macros that interfere with at least one pico.
std::vector<bool> blanking_macros(const NetworkInstance& instance);

// Association by RSRP_pico + bias >= RSRP_macro with one bias for all picos.
// UEs without any pico rate stay on the macro.
std::vector<Association> associate_by_bias(const NetworkInstance& instance,
                                           const std::vector<double>& pico_bias_db);

// Every interfering macro blanks `abs_count` subframes, every pico uses
// A_p = abs_count, and UEs select cells with a uniform pico bias.
Allocation fixed_eicic(int abs_count, double bias_db, const NetworkInstance& instance);

struct LocalHeuristic {
  Allocation allocation;
  std::vector<double> pico_bias_db;
  std::vector<int> offered_blanks;  // per macro
};

// Each pico picks the grid bias maximizing the summed ABS-rate gain
// (r^ABS - r^macro) of the UEs it captures beyond zero bias. Macro m then
// offers ceil(n_sf (1 - a_m)) blanks, a_m being the weight fraction of U_m
// still on the macro, capped at n_sf - 1 while it keeps members; a pico uses
// the smallest offer among its interferers.
LocalHeuristic local_optimal_heuristic(const NetworkInstance& instance,
                                       const bias::BiasGrid& grid = {});

// Zero bias (strictly stronger pico RSRP wins), no ABS.
Allocation no_eicic(const NetworkInstance& instance);

// Every UE on its macro with all subframes.
Allocation no_pico(const NetworkInstance& instance);

}  // namespace eicic::baselines

#endif  // EICIC_BASELINES_HPP
