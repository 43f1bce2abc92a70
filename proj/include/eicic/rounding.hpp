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

// Turns the averaged relaxed solution into a feasible integer allocation:
// binary association, integer ABS counts, proportional airtime rescaling.

#ifndef EICIC_ROUNDING_HPP
#define EICIC_ROUNDING_HPP

#include <stdexcept>
#include <vector>

#include "eicic/model.hpp"

namespace eicic::rounding {

class RoundingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Floor when x >= n_sf / 2, ceil below. Values within 1e-9 of [0, n_sf] are
// clamped first; anything further out throws RoundingError.
int rnd(double x, int n_sf);

struct Associations {
  std::vector<Association> association;
  std::vector<std::vector<std::size_t>> macro_members;  // U_m*
  std::vector<std::vector<std::size_t>> pico_members;   // U_p*

  static Associations from(std::vector<Association> association,
                           const NetworkInstance& instance);
};

// Macro when r^macro x > r^ABS y^A + r^nA y^nA, pico otherwise (ties go to the
// pico). UEs without a candidate pico, or whose pico rates are both zero,
// stay on the macro.
Associations associate_users(const PrimalState& z_hat, const NetworkInstance& instance);

struct Repair {
  std::size_t pico = 0;
  int before = 0;
  int after = 0;
};

struct AbsRounding {
  std::vector<int> abs_pico;
  std::vector<int> nonabs_macro;
  std::vector<Repair> repairs;
  // Macros whose rounded count was raised from 0 to 1 so their members get
  // some airtime.
  std::vector<std::size_t> raised_macros;
};

// A_p* and N_m* by rnd, then A_p* lowered to min over interferers of
// (n_sf - N_m*) wherever the rounded pair still collides.
AbsRounding round_abs(const PrimalState& z_hat, const Associations& associations,
                      const NetworkInstance& instance);

// Lowers A_p to the smallest blank count offered by its interferers.
std::vector<Repair> repair_interference(std::vector<int>& abs_pico,
                                        const std::vector<int>& nonabs_macro,
                                        const NetworkInstance& instance);

// Airtimes scaled to the integer budgets: x* = x N*/X, y^A* = y^A A*/Y^A,
// y^nA* = y^nA (n_sf - A*)/Y^nA. A cell with members but no relaxed mass in a
// resource splits it equally; a cell where a member would end up with zero
// throughput is re-split proportionally fair.
Allocation finalize(const PrimalState& z_hat, const Associations& associations,
                    const std::vector<int>& abs_pico,
                    const std::vector<int>& nonabs_macro,
                    const NetworkInstance& instance);

// associate_users, round_abs and finalize in sequence. Pico members that the
// rounded ABS budget cannot serve at all are moved back to their macro.
Allocation round_solution(const PrimalState& z_hat, const NetworkInstance& instance);

// Utility that returns -inf instead of throwing when some UE has no
// throughput.
double safe_utility(const std::vector<double>& throughput,
                    const NetworkInstance& instance);

}  // namespace eicic::rounding

#endif  // EICIC_ROUNDING_HPP
