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

#include "eicic/bias.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eicic::bias {

std::vector<double> BiasGrid::values() const {
  if (!(step_db > 0.0) || max_db < min_db) {
    throw std::invalid_argument("bias grid needs step > 0 and max >= min");
  }
  std::vector<double> out;
  const auto steps = static_cast<long long>(std::floor((max_db - min_db) / step_db + 1e-9));
  for (long long k = 0; k <= steps; ++k) {
    const double v = min_db + static_cast<double>(k) * step_db;
    out.push_back(std::round(v * 1e9) / 1e9);
  }
  return out;
}

bool selects_pico(const UeRecord& ue, double bias_db) {
  return ue.rsrp_pico && *ue.rsrp_pico + bias_db >= ue.rsrp_macro;
}

std::vector<std::size_t> candidates(const NetworkInstance& instance, std::size_t pico,
                                    std::size_t macro) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (ue.best_pico == pico && ue.best_macro == macro) out.push_back(u);
  }
  return out;
}

std::vector<std::size_t> association_under_bias(double bias_db,
                                                std::span<const std::size_t> candidates,
                                                const NetworkInstance& instance) {
  std::vector<std::size_t> out;
  for (std::size_t u : candidates) {
    if (selects_pico(instance.ues[u], bias_db)) out.push_back(u);
  }
  return out;
}

BiasAssignment fit_bias(std::span<const Association> target, const NetworkInstance& instance,
                        const BiasGrid& grid) {
  if (target.size() != instance.num_ues()) {
    throw std::invalid_argument("target association size does not match the UE count");
  }
  const std::vector<double> values = grid.values();
  BiasAssignment out;
  out.min_db = grid.min_db;
  out.max_db = grid.max_db;
  out.pico_bias_db.assign(instance.num_picos(), values.front());
  out.squared_error.assign(instance.num_picos(), 0.0);

  // Group UEs by (pico, macro).
  std::vector<std::vector<std::vector<std::size_t>>> groups(
      instance.num_picos(), std::vector<std::vector<std::size_t>>(instance.num_macros()));
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (ue.best_pico && ue.rsrp_pico) groups[*ue.best_pico][ue.best_macro].push_back(u);
  }

  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    double best_error = std::numeric_limits<double>::infinity();
    for (double b : values) {
      double error = 0.0;
      for (const auto& group : groups[p]) {
        double fitted = 0.0;
        double wanted = 0.0;
        for (std::size_t u : group) {
          const double w = instance.ues[u].weight;
          if (selects_pico(instance.ues[u], b)) fitted += w;
          if (target[u] == Association::kPico) wanted += w;
        }
        error += (fitted - wanted) * (fitted - wanted);
      }
      if (error < best_error) {
        best_error = error;
        out.pico_bias_db[p] = b;
      }
    }
    out.squared_error[p] = best_error;
  }
  return out;
}

NetworkInstance bias_constrained_preprocess(const NetworkInstance& instance,
                                            std::span<const double> min_db,
                                            std::span<const double> max_db) {
  if (min_db.size() != instance.num_picos() || max_db.size() != instance.num_picos()) {
    throw std::invalid_argument("bias bounds must be given per pico");
  }
  NetworkInstance out = instance;
  for (UeRecord& ue : out.ues) {
    if (!ue.best_pico || !ue.rsrp_pico) continue;
    const std::size_t p = *ue.best_pico;
    if (selects_pico(ue, min_db[p])) {
      ue.rate_macro = 0.0;
    } else if (!selects_pico(ue, max_db[p])) {
      ue.rate_pico_abs = 0.0;
      ue.rate_pico_nonabs = 0.0;
    }
  }
  return out;
}

NetworkInstance bias_constrained_preprocess(const NetworkInstance& instance, double min_db,
                                            double max_db) {
  const std::vector<double> lo(instance.num_picos(), min_db);
  const std::vector<double> hi(instance.num_picos(), max_db);
  return bias_constrained_preprocess(instance, lo, hi);
}

std::string AbsPattern::bits(const std::vector<bool>& bitmap) {
  std::string s;
  s.reserve(bitmap.size());
  for (bool b : bitmap) s.push_back(b ? '1' : '0');
  return s;
}

AbsPattern to_patterns(std::span<const int> abs_pico, std::span<const int> nonabs_macro,
                       const NetworkInstance& instance) {
  const int n_sf = instance.n_sf;
  if (abs_pico.size() != instance.num_picos() || nonabs_macro.size() != instance.num_macros()) {
    throw PatternError("ABS counts do not match the cell counts");
  }
  AbsPattern out;
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const int n = nonabs_macro[m];
    if (n < 0 || n > n_sf) throw PatternError("N_m out of range at macro " + std::to_string(m));
    std::vector<bool> blank(n_sf, false);
    for (int k = 0; k < n_sf - n; ++k) blank[k] = true;
    out.macro_blank.push_back(std::move(blank));
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    std::vector<bool> usable(n_sf, true);
    int offered = n_sf;
    for (std::size_t m : instance.interferers[p]) {
      offered = std::min(offered, n_sf - nonabs_macro[m]);
      for (int k = 0; k < n_sf; ++k) usable[k] = usable[k] && out.macro_blank[m][k];
    }
    if (abs_pico[p] < 0 || abs_pico[p] > offered) {
      throw PatternError("pico " + std::to_string(p) + " uses " + std::to_string(abs_pico[p]) +
                         " ABS but its interferers blank only " + std::to_string(offered));
    }
    out.pico_usable.push_back(std::move(usable));
  }
  return out;
}

}  // namespace eicic::bias
