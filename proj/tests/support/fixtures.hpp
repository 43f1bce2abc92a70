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

// Instance builders and independent reference computations shared by the
// unit and acceptance tests.

#ifndef EICIC_TESTS_FIXTURES_HPP
#define EICIC_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "eicic/model.hpp"
#include "eicic/rng.hpp"
#include "eicic/scenario.hpp"

namespace eicic::testing {

inline UeRecord macro_ue(std::uint32_t id, std::size_t macro, double rate, double weight = 1.0,
                         double rsrp = -80.0) {
  UeRecord ue;
  ue.id = id;
  ue.weight = weight;
  ue.best_macro = macro;
  ue.rate_macro = rate;
  ue.rsrp_macro = rsrp;
  return ue;
}

inline UeRecord pico_ue(std::uint32_t id, std::size_t macro, std::size_t pico,
                        double rate_macro, double rate_abs, double rate_nonabs,
                        double rsrp_macro = -80.0, double rsrp_pico = -85.0,
                        double weight = 1.0) {
  UeRecord ue = macro_ue(id, macro, rate_macro, weight, rsrp_macro);
  ue.best_pico = pico;
  ue.rate_pico_abs = rate_abs;
  ue.rate_pico_nonabs = rate_nonabs;
  ue.rsrp_pico = rsrp_pico;
  return ue;
}

// k UEs on one macro with the given rates, no picos.
inline NetworkInstance lone_macro(const std::vector<double>& rates, int n_sf = 40) {
  NetworkInstance inst = make_instance(1, 0, n_sf);
  for (std::size_t u = 0; u < rates.size(); ++u) {
    inst.ues.push_back(macro_ue(static_cast<std::uint32_t>(u), 0, rates[u]));
  }
  return inst;
}

// Small scenario used where a realistic generated instance is needed.
inline scenario::ScenarioSpec small_spec(std::uint64_t seed, std::size_t ues = 60) {
  scenario::ScenarioSpec spec;
  spec.area_width_km = 1.0;
  spec.area_height_km = 1.0;
  spec.macro_count = 3;
  spec.pico_count = 2;
  spec.ue_count = ues;
  spec.rng_seed = seed;
  return spec;
}

// Nine hex sites with a dense UE cluster (radius 80 m, 30x density) around
// each of nine near-edge picos transmitting at 36 dBm.
inline scenario::ScenarioSpec hotspot_spec(std::uint64_t seed) {
  scenario::ScenarioSpec spec;
  spec.area_width_km = 1.6;
  spec.area_height_km = 1.6;
  spec.macro_count = 9;
  spec.macro_spacing_m = 500.0;
  spec.pico_count = 9;
  spec.pico_placement = scenario::PicoPlacement::kNearEdge;
  spec.pico_tx_power_dbm = 36.0;
  spec.ue_density_per_km2 = 450.0;
  for (std::size_t p = 0; p < 9; ++p) {
    scenario::Hotspot h;
    h.at_pico = p;
    h.radius_m = 80.0;
    h.density_multiplier = 30.0;
    spec.hotspots.push_back(h);
  }
  spec.rng_seed = seed;
  return spec;
}

inline double dbm_to_mw_ref(double dbm) { return std::pow(10.0, dbm / 10.0); }

// The Lagrangian written out term by term from its definition, independent of
// the library's Topology bookkeeping.
inline double lagrangian_ref(const PrimalState& z, const DualState& p,
                             const NetworkInstance& inst) {
  double value = 0.0;
  for (std::size_t u = 0; u < inst.num_ues(); ++u) {
    const UeRecord& ue = inst.ues[u];
    value += ue.weight * std::log(z.throughput[u]);
    value -= p.lambda[u] * (z.throughput[u] - ue.rate_macro * z.x[u] -
                            ue.rate_pico_abs * z.y_abs[u] - ue.rate_pico_nonabs * z.y_nonabs[u]);
  }
  std::size_t e = 0;
  for (std::size_t q = 0; q < inst.num_picos(); ++q) {
    for (std::size_t m : inst.interferers[q]) {
      value -= p.mu[e++] * (z.abs_pico[q] + z.nonabs_macro[m] - inst.n_sf);
    }
  }
  for (std::size_t m = 0; m < inst.num_macros(); ++m) {
    double sum = 0.0;
    for (std::size_t u = 0; u < inst.num_ues(); ++u) {
      if (inst.ues[u].best_macro == m) sum += z.x[u];
    }
    value -= p.beta_macro[m] * (sum - z.nonabs_macro[m]);
  }
  for (std::size_t q = 0; q < inst.num_picos(); ++q) {
    double a = 0.0, t = 0.0;
    for (std::size_t u = 0; u < inst.num_ues(); ++u) {
      if (inst.ues[u].best_pico == q) {
        a += z.y_abs[u];
        t += z.y_abs[u] + z.y_nonabs[u];
      }
    }
    value -= p.beta_pico[q] * (a - z.abs_pico[q]);
    value -= p.alpha[q] * (t - inst.n_sf);
  }
  return value;
}

// Best utility of a two-member pico cell over a grid that splits the ABS
// budget and the non-ABS budget into `steps` equal parts each.
inline double pico_grid_search(double w0, double a0, double b0, double w1, double a1, double b1,
                               double abs_frames, double total_frames, int steps) {
  const double nonabs_frames = total_frames - abs_frames;
  double best = -INFINITY;
  for (int i = 0; i <= steps; ++i) {
    const double ya0 = abs_frames * i / steps;
    const double ya1 = abs_frames - ya0;
    for (int j = 0; j <= steps; ++j) {
      const double yn0 = nonabs_frames * j / steps;
      const double yn1 = nonabs_frames - yn0;
      const double r0 = a0 * ya0 + b0 * yn0;
      const double r1 = a1 * ya1 + b1 * yn1;
      if (r0 <= 0.0 || r1 <= 0.0) continue;
      best = std::max(best, w0 * std::log(r0) + w1 * std::log(r1));
    }
  }
  return best;
}

}  // namespace eicic::testing

#endif  // EICIC_TESTS_FIXTURES_HPP
