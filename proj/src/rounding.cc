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

#include "eicic/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eicic/inner_pf.hpp"

namespace eicic::rounding {

namespace {

bool pico_servable(const UeRecord& ue) {
  return ue.has_pico() && (ue.rate_pico_abs > 0.0 || ue.rate_pico_nonabs > 0.0);
}

// Scales `relaxed` to sum to `budget`; equal split when the relaxed mass is 0.
void scale_into(const std::vector<std::size_t>& members, const std::vector<double>& relaxed,
                double budget, std::vector<double>& out) {
  if (members.empty()) return;
  double mass = 0.0;
  for (std::size_t u : members) mass += relaxed[u];
  for (std::size_t u : members) {
    out[u] = mass > 0.0 ? relaxed[u] * budget / mass
                        : budget / static_cast<double>(members.size());
  }
}

}  // namespace

int rnd(double x, int n_sf) {
  const double hi = static_cast<double>(n_sf);
  if (!(x >= -kFeasibilityTolerance && x <= hi + kFeasibilityTolerance)) {
    throw RoundingError("rnd argument " + std::to_string(x) + " outside [0, " +
                        std::to_string(n_sf) + "]");
  }
  x = std::clamp(x, 0.0, hi);
  const double r = x >= hi / 2.0 ? std::floor(x) : std::ceil(x);
  return static_cast<int>(r);
}

Associations Associations::from(std::vector<Association> association,
                                const NetworkInstance& instance) {
  Associations out;
  out.association = std::move(association);
  out.macro_members.assign(instance.num_macros(), {});
  out.pico_members.assign(instance.num_picos(), {});
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (out.association[u] == Association::kPico) {
      out.pico_members[*ue.best_pico].push_back(u);
    } else {
      out.macro_members[ue.best_macro].push_back(u);
    }
  }
  return out;
}

Associations associate_users(const PrimalState& z_hat, const NetworkInstance& instance) {
  std::vector<Association> association(instance.num_ues(), Association::kMacro);
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    if (!pico_servable(ue)) continue;
    const double via_macro = ue.rate_macro * z_hat.x[u];
    const double via_pico =
        ue.rate_pico_abs * z_hat.y_abs[u] + ue.rate_pico_nonabs * z_hat.y_nonabs[u];
    if (!(via_macro > via_pico)) association[u] = Association::kPico;
  }
  return Associations::from(std::move(association), instance);
}

std::vector<Repair> repair_interference(std::vector<int>& abs_pico,
                                        const std::vector<int>& nonabs_macro,
                                        const NetworkInstance& instance) {
  std::vector<Repair> repairs;
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    int cap = instance.n_sf;
    for (std::size_t m : instance.interferers[p]) {
      cap = std::min(cap, instance.n_sf - nonabs_macro[m]);
    }
    if (abs_pico[p] > cap) {
      repairs.push_back({p, abs_pico[p], cap});
      abs_pico[p] = cap;
    }
  }
  return repairs;
}

AbsRounding round_abs(const PrimalState& z_hat, const Associations& associations,
                      const NetworkInstance& instance) {
  AbsRounding out;
  out.nonabs_macro.resize(instance.num_macros());
  out.abs_pico.resize(instance.num_picos());
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    out.nonabs_macro[m] = rnd(z_hat.nonabs_macro[m], instance.n_sf);
    if (out.nonabs_macro[m] == 0 && !associations.macro_members[m].empty()) {
      out.nonabs_macro[m] = 1;
      out.raised_macros.push_back(m);
    }
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    out.abs_pico[p] = rnd(z_hat.abs_pico[p], instance.n_sf);
  }
  out.repairs = repair_interference(out.abs_pico, out.nonabs_macro, instance);
  return out;
}

Allocation finalize(const PrimalState& z_hat, const Associations& associations,
                    const std::vector<int>& abs_pico,
                    const std::vector<int>& nonabs_macro,
                    const NetworkInstance& instance) {
  const std::size_t n = instance.num_ues();
  const double n_sf = instance.n_sf;
  Allocation out;
  out.association = associations.association;
  out.abs_pico = abs_pico;
  out.nonabs_macro = nonabs_macro;
  out.x.assign(n, 0.0);
  out.y_abs.assign(n, 0.0);
  out.y_nonabs.assign(n, 0.0);
  out.throughput.assign(n, 0.0);

  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const auto& members = associations.macro_members[m];
    const double frames = nonabs_macro[m];
    scale_into(members, z_hat.x, frames, out.x);
    bool starved = false;
    for (std::size_t u : members) {
      out.throughput[u] = instance.ues[u].rate_macro * out.x[u];
      starved = starved || !(out.throughput[u] > 0.0);
    }
    if (starved && frames > 0.0) {
      std::vector<baselines::PfMember> pf;
      for (std::size_t u : members) {
        pf.push_back({instance.ues[u].weight, instance.ues[u].rate_macro, 0.0});
      }
      bool any_rate = false;
      for (const auto& member : pf) any_rate = any_rate || member.rate_abs > 0.0;
      if (!any_rate) continue;
      const auto split = baselines::macro_pf_allocation(pf, frames, "macro " + std::to_string(m));
      for (std::size_t i = 0; i < members.size(); ++i) {
        out.x[members[i]] = split.y_abs[i];
        out.throughput[members[i]] = split.throughput[i];
      }
    }
  }

  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    const auto& members = associations.pico_members[p];
    const double abs_frames = abs_pico[p];
    scale_into(members, z_hat.y_abs, abs_frames, out.y_abs);
    scale_into(members, z_hat.y_nonabs, n_sf - abs_frames, out.y_nonabs);
    bool starved = false;
    for (std::size_t u : members) {
      const UeRecord& ue = instance.ues[u];
      out.throughput[u] = ue.rate_pico_abs * out.y_abs[u] + ue.rate_pico_nonabs * out.y_nonabs[u];
      starved = starved || !(out.throughput[u] > 0.0);
    }
    if (starved) {
      std::vector<baselines::PfMember> pf;
      bool any_rate = false;
      for (std::size_t u : members) {
        const UeRecord& ue = instance.ues[u];
        pf.push_back({ue.weight, ue.rate_pico_abs, ue.rate_pico_nonabs});
        any_rate = any_rate || ue.rate_pico_abs > 0.0 || ue.rate_pico_nonabs > 0.0;
      }
      if (!any_rate) continue;
      const auto split =
          baselines::pico_pf_allocation(pf, abs_frames, n_sf, "pico " + std::to_string(p));
      for (std::size_t i = 0; i < members.size(); ++i) {
        out.y_abs[members[i]] = split.y_abs[i];
        out.y_nonabs[members[i]] = split.y_nonabs[i];
        out.throughput[members[i]] = split.throughput[i];
      }
    }
  }
  out.utility = safe_utility(out.throughput, instance);
  return out;
}

Allocation round_solution(const PrimalState& z_hat, const NetworkInstance& instance) {
  Associations associations = associate_users(z_hat, instance);
  AbsRounding rounded = round_abs(z_hat, associations, instance);

  // A pico member with no non-ABS rate and no ABS budget left cannot be
  // served; fall back to its macro when that link works. Each pass only
  // moves UEs pico -> macro, so this terminates.
  for (;;) {
    bool moved = false;
    std::vector<Association> association = associations.association;
    for (std::size_t p = 0; p < instance.num_picos(); ++p) {
      for (std::size_t u : associations.pico_members[p]) {
        const UeRecord& ue = instance.ues[u];
        const bool served = ue.rate_pico_nonabs > 0.0 ||
                            (ue.rate_pico_abs > 0.0 && rounded.abs_pico[p] > 0);
        if (!served && ue.rate_macro > 0.0) {
          association[u] = Association::kMacro;
          moved = true;
        }
      }
    }
    if (!moved) break;
    associations = Associations::from(std::move(association), instance);
    for (std::size_t m = 0; m < instance.num_macros(); ++m) {
      if (rounded.nonabs_macro[m] == 0 && !associations.macro_members[m].empty()) {
        rounded.nonabs_macro[m] = 1;
        rounded.raised_macros.push_back(m);
      }
    }
    const auto more = repair_interference(rounded.abs_pico, rounded.nonabs_macro, instance);
    rounded.repairs.insert(rounded.repairs.end(), more.begin(), more.end());
  }
  return finalize(z_hat, associations, rounded.abs_pico, rounded.nonabs_macro, instance);
}

double safe_utility(const std::vector<double>& throughput, const NetworkInstance& instance) {
  double total = 0.0;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    if (!(throughput[u] > 0.0)) return -std::numeric_limits<double>::infinity();
    total += instance.ues[u].weight * std::log(throughput[u]);
  }
  return total;
}

}  // namespace eicic::rounding
