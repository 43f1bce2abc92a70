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

// Weighted proportional-fair airtime split inside one cell once association
// and subframe budgets are fixed.

#ifndef EICIC_INNER_PF_HPP
#define EICIC_INNER_PF_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eicic::baselines {

class ZeroRateCell : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PfMember {
  double weight = 1.0;
  double rate_abs = 0.0;     // bits/subframe in ABS subframes (macro: its rate)
  double rate_nonabs = 0.0;  // bits/subframe in non-ABS subframes
};

struct PfAllocation {
  std::vector<double> y_abs;     // macro cells: the airtime x
  std::vector<double> y_nonabs;  // macro cells: all zero
  std::vector<double> throughput;
  // Market-clearing prices of an ABS and a non-ABS subframe. At the optimum
  // w_u r/R_u equals the price of every resource u uses and is at most the
  // price of the others.
  double price_abs = 0.0;
  double price_nonabs = 0.0;
};

// Macro cell: x_u = w_u * frames / sum(w) over members with positive rate.
// Throws ZeroRateCell naming `cell` when every member rate is zero.
PfAllocation macro_pf_allocation(std::span<const PfMember> members,
                                 double frames, const std::string& cell);

// Pico cell: maximize sum w ln(a y^A + b y^nA) subject to sum y^A <= abs and
// sum (y^A + y^nA) <= total. Solved exactly as a two-good Fisher market:
// members sorted by a/b buy ABS above a price-ratio threshold and non-ABS
// below it, with at most one member split at the threshold.
PfAllocation pico_pf_allocation(std::span<const PfMember> members,
                                double abs_frames, double total_frames,
                                const std::string& cell);

// Largest relative violation of the KKT conditions and budget equalities.
double pico_kkt_residual(std::span<const PfMember> members,
                         const PfAllocation& allocation, double abs_frames,
                         double total_frames);

}  // namespace eicic::baselines

#endif  // EICIC_INNER_PF_HPP
