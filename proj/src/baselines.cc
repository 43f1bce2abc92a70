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

#include "eicic/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eicic/rounding.hpp"

namespace eicic::baselines {

namespace {

bool pico_servable(const UeRecord& ue) {
  return ue.has_pico() && (ue.rate_pico_abs > 0.0 || ue.rate_pico_nonabs > 0.0);
}

}  // namespace

Allocation pf_allocation(const NetworkInstance& instance,
                         const std::vector<Association>& association,
                         const std::vector<int>& abs_pico,
                         const std::vector<int>& nonabs_macro) {
  const std::size_t n = instance.num_ues();
  Allocation out;
  out.association = association;
  out.abs_pico = abs_pico;
  out.nonabs_macro = nonabs_macro;
  out.x.assign(n, 0.0);
  out.y_abs.assign(n, 0.0);
  out.y_nonabs.assign(n, 0.0);
  out.throughput.assign(n, 0.0);

  std::vector<std::vector<std::size_t>> macro_members(instance.num_macros());
  std::vector<std::vector<std::size_t>> pico_members(instance.num_picos());
  for (std::size_t u = 0; u < n; ++u) {
    const UeRecord& ue = instance.ues[u];
    if (association[u] == Association::kPico) {
      pico_members[*ue.best_pico].push_back(u);
    } else {
      macro_members[ue.best_macro].push_back(u);
    }
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const auto& members = macro_members[m];
    std::vector<PfMember> pf;
    bool any_rate = false;
    for (std::size_t u : members) {
      pf.push_back({instance.ues[u].weight, instance.ues[u].rate_macro, 0.0});
      any_rate = any_rate || instance.ues[u].rate_macro > 0.0;
    }
    if (!any_rate) continue;
    const auto split = macro_pf_allocation(pf, nonabs_macro[m], "macro " + std::to_string(m));
    for (std::size_t i = 0; i < members.size(); ++i) {
      out.x[members[i]] = split.y_abs[i];
      out.throughput[members[i]] = split.throughput[i];
    }
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    const auto& members = pico_members[p];
    std::vector<PfMember> pf;
    bool any_rate = false;
    for (std::size_t u : members) {
      const UeRecord& ue = instance.ues[u];
      pf.push_back({ue.weight, ue.rate_pico_abs, ue.rate_pico_nonabs});
      any_rate = any_rate || ue.rate_pico_abs > 0.0 || ue.rate_pico_nonabs > 0.0;
    }
    if (!any_rate) continue;
    const auto split =
        pico_pf_allocation(pf, abs_pico[p], instance.n_sf, "pico " + std::to_string(p));
    for (std::size_t i = 0; i < members.size(); ++i) {
      out.y_abs[members[i]] = split.y_abs[i];
      out.y_nonabs[members[i]] = split.y_nonabs[i];
      out.throughput[members[i]] = split.throughput[i];
    }
  }
  out.utility = rounding::safe_utility(out.throughput, instance);
  return out;
}

std::vector<bool> blanking_macros(const NetworkInstance& instance) {
  std::vector<bool> out(instance.num_macros(), false);
  for (const auto& set : instance.interferers) {
    for (std::size_t m : set) out[m] = true;
  }
  return out;
}

std::vector<Association> associate_by_bias(const NetworkInstance& instance,
                                           const std::vector<double>& pico_bias_db) {
  std::vector<Association> association(instance.num_ues(), Association::kMacro);
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (pico_servable(ue) && bias::selects_pico(ue, pico_bias_db[*ue.best_pico])) {
      association[u] = Association::kPico;
    }
  }
  return association;
}

Allocation fixed_eicic(int abs_count, double bias_db, const NetworkInstance& instance) {
  if (abs_count < 0 || abs_count > instance.n_sf) {
    throw std::invalid_argument("abs_count must lie in [0, n_sf]");
  }
  const auto blanking = blanking_macros(instance);
  std::vector<int> nonabs(instance.num_macros(), instance.n_sf);
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    if (blanking[m]) nonabs[m] = instance.n_sf - abs_count;
  }
  const std::vector<int> abs(instance.num_picos(), abs_count);
  const std::vector<double> biases(instance.num_picos(), bias_db);
  return pf_allocation(instance, associate_by_bias(instance, biases), abs, nonabs);
}

LocalHeuristic local_optimal_heuristic(const NetworkInstance& instance,
                                       const bias::BiasGrid& grid) {
  const std::vector<double> values = grid.values();
  LocalHeuristic out;
  out.pico_bias_db.assign(instance.num_picos(), values.front());

  std::vector<std::vector<std::size_t>> pico_ues(instance.num_picos());
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (pico_servable(ue)) pico_ues[*ue.best_pico].push_back(u);
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    double best_gain = -std::numeric_limits<double>::infinity();
    for (double b : values) {
      double gain = 0.0;
      for (std::size_t u : pico_ues[p]) {
        const UeRecord& ue = instance.ues[u];
        if (bias::selects_pico(ue, b) && !bias::selects_pico(ue, 0.0)) {
          gain += ue.rate_pico_abs - ue.rate_macro;
        }
      }
      if (gain > best_gain) {
        best_gain = gain;
        out.pico_bias_db[p] = b;
      }
    }
  }

  const auto association = associate_by_bias(instance, out.pico_bias_db);
  const auto blanking = blanking_macros(instance);
  const int n_sf = instance.n_sf;
  std::vector<double> coverage(instance.num_macros(), 0.0);
  std::vector<double> kept(instance.num_macros(), 0.0);
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    coverage[ue.best_macro] += ue.weight;
    if (association[u] == Association::kMacro) kept[ue.best_macro] += ue.weight;
  }
  out.offered_blanks.assign(instance.num_macros(), 0);
  std::vector<int> nonabs(instance.num_macros(), n_sf);
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    if (!blanking[m] || coverage[m] <= 0.0) continue;
    const double remaining = kept[m] / coverage[m];
    int blanks = static_cast<int>(std::ceil(n_sf * (1.0 - remaining) - 1e-9));
    blanks = std::clamp(blanks, 0, n_sf);
    if (kept[m] > 0.0) blanks = std::min(blanks, n_sf - 1);
    out.offered_blanks[m] = blanks;
    nonabs[m] = n_sf - blanks;
  }
  std::vector<int> abs(instance.num_picos(), n_sf);
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    for (std::size_t m : instance.interferers[p]) abs[p] = std::min(abs[p], out.offered_blanks[m]);
  }
  out.allocation = pf_allocation(instance, association, abs, nonabs);
  return out;
}

Allocation no_eicic(const NetworkInstance& instance) {
  std::vector<Association> association(instance.num_ues(), Association::kMacro);
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (pico_servable(ue) && ue.rsrp_pico && *ue.rsrp_pico > ue.rsrp_macro) {
      association[u] = Association::kPico;
    }
  }
  const std::vector<int> abs(instance.num_picos(), 0);
  const std::vector<int> nonabs(instance.num_macros(), instance.n_sf);
  return pf_allocation(instance, association, abs, nonabs);
}

Allocation no_pico(const NetworkInstance& instance) {
  const std::vector<Association> association(instance.num_ues(), Association::kMacro);
  const std::vector<int> abs(instance.num_picos(), 0);
  const std::vector<int> nonabs(instance.num_macros(), instance.n_sf);
  return pf_allocation(instance, association, abs, nonabs);
}

}  // namespace eicic::baselines
