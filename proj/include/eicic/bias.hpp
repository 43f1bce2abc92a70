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

// Standard-compliant outputs: per-pico cell selection biases fitted to a
// target association, and ABS subframe bitmaps derived from integer counts.

#ifndef EICIC_BIAS_HPP
#define EICIC_BIAS_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eicic/model.hpp"

namespace eicic::bias {

class PatternError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BiasGrid {
  double min_db = 0.0;
  double max_db = 15.0;
  double step_db = 0.1;

  // min_db + k step_db up to max_db, each rounded to 1e-9 dB so that decimal
  // steps land on their decimal values.
  std::vector<double> values() const;
};

struct BiasAssignment {
  std::vector<double> pico_bias_db;
  std::vector<double> squared_error;  // at the chosen bias, per pico
  double min_db = 0.0;
  double max_db = 15.0;
};

// A UE selects the pico when RSRP_pico + bias >= RSRP_macro.
bool selects_pico(const UeRecord& ue, double bias_db);

// C_{p,m}: UEs whose best pico is p and best macro is m.
std::vector<std::size_t> candidates(const NetworkInstance& instance, std::size_t pico,
                                    std::size_t macro);

// Members of `candidates` that select the pico under `bias_db`.
std::vector<std::size_t> association_under_bias(double bias_db,
                                                std::span<const std::size_t> candidates,
                                                const NetworkInstance& instance);

// Per pico, the grid value minimizing sum over macros m of
// (W_{p,m}(b) - W*_{p,m})^2, where W(b) is the weight of C_{p,m} selecting
// the pico at bias b and W* the weight the target sends to the pico. Every
// macro with a nonempty C_{p,m} contributes. Ties go to the smallest bias.
BiasAssignment fit_bias(std::span<const Association> target, const NetworkInstance& instance,
                        const BiasGrid& grid);

// Zeroes the macro rate of UEs that select their pico even at the minimum
// bias and both pico rates of UEs that stay on the macro even at the
// maximum bias. Per-pico bounds.
NetworkInstance bias_constrained_preprocess(const NetworkInstance& instance,
                                            std::span<const double> min_db,
                                            std::span<const double> max_db);
NetworkInstance bias_constrained_preprocess(const NetworkInstance& instance, double min_db,
                                            double max_db);

struct AbsPattern {
  std::vector<std::vector<bool>> macro_blank;  // true = blanked subframe
  std::vector<std::vector<bool>> pico_usable;  // AND of interferer blanks

  static std::string bits(const std::vector<bool>& bitmap);
};

// Macro m blanks subframes 0 .. n_sf - N_m - 1, so blank sets are nested
// prefixes and a pico sees the smallest offer among its interferers. Throws
// PatternError when some A_p exceeds that offer.
AbsPattern to_patterns(std::span<const int> abs_pico, std::span<const int> nonabs_macro,
                       const NetworkInstance& instance);

}  // namespace eicic::bias

#endif  // EICIC_BIAS_HPP
