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

#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "eicic/io.hpp"
#include "eicic/scenario.hpp"
#include "support/fixtures.hpp"

using namespace eicic;
using namespace eicic::scenario;
using eicic::testing::dbm_to_mw_ref;

namespace {

double to_db(double linear) { return 10.0 * std::log10(linear); }

ScenarioSpec seven_site_spec(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.area_width_km = 2.0;
  spec.area_height_km = 1.0;
  spec.macro_count = 7;
  spec.pico_count = 3;
  spec.ue_density_per_km2 = 450.0;
  spec.rng_seed = seed;
  return spec;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("sinr with unit powers and no interference is one") {
  CHECK(sinr_pico(1.0, 0.0, 0.0, 1.0, true) == 1.0);
  CHECK(sinr_pico(1.0, 0.0, 0.0, 1.0, false) == 1.0);
  CHECK(sinr_macro(1.0, 0.0, 0.0, 1.0) == 1.0);
}

TEST_CASE("sinr in dB against a hand computation") {
  const double rx = dbm_to_mw(-90.0);
  const double pico = dbm_to_mw(-100.0);
  const double macro = dbm_to_mw(-95.0);
  const double noise = dbm_to_mw(-104.0);
  // 1e-9 / (1e-10 + 3.981e-11) and 1e-9 / (1e-10 + 3.162e-10 + 3.981e-11).
  const double abs_ref = to_db(dbm_to_mw_ref(-90) / (dbm_to_mw_ref(-100) + dbm_to_mw_ref(-104)));
  const double nonabs_ref = to_db(dbm_to_mw_ref(-90) / (dbm_to_mw_ref(-100) + dbm_to_mw_ref(-95) +
                                                        dbm_to_mw_ref(-104)));
  CHECK(abs_ref == doctest::Approx(8.5446).epsilon(1e-4));
  CHECK(nonabs_ref == doctest::Approx(3.4100).epsilon(1e-4));
  CHECK(to_db(sinr_pico(rx, pico, macro, noise, true)) == doctest::Approx(abs_ref).epsilon(1e-12));
  CHECK(to_db(sinr_pico(rx, pico, macro, noise, false)) ==
        doctest::Approx(nonabs_ref).epsilon(1e-12));
  CHECK(sinr_macro(rx, pico, macro, noise) == sinr_pico(rx, pico, macro, noise, false));
  CHECK(sinr_macro(rx, 0.0, 0.0, noise) == doctest::Approx(rx / noise));
}

TEST_CASE("ABS sinr dominates non-ABS sinr") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double rx = rng.uniform(0, 1), pi = rng.uniform(0, 1), mi = rng.uniform(0, 1);
    const double n = rng.uniform(1e-3, 1);
    CHECK(sinr_pico(rx, pi, mi, n, true) >= sinr_pico(rx, pi, mi, n, false));
  }
}

TEST_CASE("rate from sinr") {
  RateModel unit;
  unit.snr_gap_db = 0.0;
  unit.efficiency_factor = 1.0;
  unit.max_efficiency = 6.0;
  CHECK(rate_from_sinr(0.0, 10e6, unit) == 0.0);
  CHECK(rate_from_sinr(1.0, 10e6, unit) == doctest::Approx(1e4).epsilon(1e-12));
  CHECK(rate_from_sinr(1e6, 10e6, unit) == doctest::Approx(6.0 * 10e6 * 1e-3));
  double prev = 0.0;
  for (double s = 0.0; s < 100.0; s += 0.37) {
    const double r = rate_from_sinr(s, 10e6);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("rate from an MCS table is a step function") {
  RateModel table;
  table.mcs_table = {{0.0, 0.5}, {10.0, 2.0}, {20.0, 4.0}};
  CHECK(rate_from_sinr(std::pow(10.0, -0.5), 1e6, table) == 0.0);
  CHECK(rate_from_sinr(std::pow(10.0, 0.5), 1e6, table) == doctest::Approx(500.0));
  CHECK(rate_from_sinr(std::pow(10.0, 1.5), 1e6, table) == doctest::Approx(2000.0));
  CHECK(rate_from_sinr(1e6, 1e6, table) == doctest::Approx(4000.0));
}

TEST_CASE("split-band rate composition") {
  CHECK(compose_icic_rate(4.0, 1.0, 6e6, 4e6) == doctest::Approx(28000.0));
  CHECK(compose_icic_rate(3.0, 2.0, 5e6, 0.0) == doctest::Approx(3.0 * 5e6 * 1e-3));
  CHECK(compose_icic_rate(2.5, 2.5, 6e6, 4e6) == doctest::Approx(2.5 * 10e6 * 1e-3));
}

TEST_CASE("one macro without picos gives an empty interference graph") {
  ScenarioSpec spec;
  spec.area_width_km = 0.5;
  spec.area_height_km = 0.5;
  spec.macro_count = 1;
  spec.pico_count = 0;
  spec.ue_count = 4;
  const Snapshot snap = generate(spec);
  CHECK(snap.instance.num_macros() == 1);
  CHECK(snap.instance.num_picos() == 0);
  CHECK(snap.instance.num_ues() == 4);
  CHECK(snap.instance.interferers.empty());
  for (const UeRecord& ue : snap.instance.ues) CHECK_FALSE(ue.has_pico());
}

TEST_CASE("generation is deterministic in the seed") {
  const ScenarioSpec spec = seven_site_spec(42);
  const std::string a = io::instance_to_json(generate(spec).instance).dump();
  const std::string b = io::instance_to_json(generate(spec).instance).dump();
  CHECK(a == b);
  ScenarioSpec other = spec;
  other.rng_seed = 43;
  CHECK(io::instance_to_json(generate(other).instance).dump() != a);
}

TEST_CASE("seven-site grid with three picos") {
  const Snapshot snap = generate(seven_site_spec(7));
  const NetworkInstance& inst = snap.instance;
  CHECK(inst.num_macros() == 7);
  CHECK(inst.num_picos() == 3);
  CHECK(inst.num_ues() == 900);
  for (std::size_t p = 0; p < 3; ++p) CHECK_FALSE(inst.interferers[p].empty());
  std::size_t with_pico = 0;
  for (const UeRecord& ue : inst.ues) {
    CHECK(ue.rate_pico_abs >= ue.rate_pico_nonabs);
    CHECK(ue.rate_macro >= 0.0);
    if (ue.has_pico()) {
      ++with_pico;
      CHECK(*ue.rsrp_pico >= ue.rsrp_macro - 15.0);
    }
  }
  CHECK(with_pico > 0);
  CHECK_NOTHROW(validate(inst));
}

TEST_CASE("UEs pick the strongest macro and the strongest pico") {
  ScenarioSpec spec = seven_site_spec(9);
  spec.pico_tx_power_dbm = 30.0;
  const Snapshot snap = generate(spec);
  const Geometry& g = snap.geometry;
  for (std::size_t u = 0; u < snap.instance.num_ues(); ++u) {
    const UeRecord& ue = snap.instance.ues[u];
    for (std::size_t m = 0; m < g.macros.size(); ++m) {
      CHECK(g.pathloss_macro_db[u][ue.best_macro] <= g.pathloss_macro_db[u][m]);
    }
    if (ue.has_pico()) {
      for (std::size_t p = 0; p < g.picos.size(); ++p) {
        CHECK(g.pathloss_pico_db[u][*ue.best_pico] <= g.pathloss_pico_db[u][p]);
      }
    }
  }
}

TEST_CASE("interference graph thresholds") {
  const Snapshot snap = generate(seven_site_spec(3));
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& set : build_interference_graph(snap.geometry, inf)) CHECK(set.empty());
  for (const auto& set : build_interference_graph(snap.geometry, -inf)) {
    CHECK(set.size() == snap.geometry.macros.size());
  }
  std::vector<std::vector<std::size_t>> prev = build_interference_graph(snap.geometry, -20.0);
  for (double t = -10.0; t <= 60.0; t += 10.0) {
    const auto next = build_interference_graph(snap.geometry, t);
    for (std::size_t p = 0; p < next.size(); ++p) {
      for (std::size_t m : next[p]) {
        CHECK(std::find(prev[p].begin(), prev[p].end(), m) != prev[p].end());
      }
    }
    prev = next;
  }
}

TEST_CASE("an edge pico hears its nearest macro") {
  const Snapshot snap = generate(seven_site_spec(4));
  const Geometry& g = snap.geometry;
  for (std::size_t p = 0; p < g.picos.size(); ++p) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < g.macros.size(); ++m) {
      const double d = std::hypot(g.picos[p].x - g.macros[m].x, g.picos[p].y - g.macros[m].y);
      if (d < best) {
        best = d;
        nearest = m;
      }
    }
    const auto& set = snap.instance.interferers[p];
    CHECK(std::find(set.begin(), set.end(), nearest) != set.end());
  }
}

TEST_CASE("hotspots concentrate UEs around their pico") {
  ScenarioSpec spec = eicic::testing::hotspot_spec(2);
  const Snapshot snap = generate(spec);
  const Geometry& g = snap.geometry;
  std::size_t near = 0;
  for (const UeGeometry& ue : g.ues) {
    for (const Point& p : g.picos) {
      if (std::hypot(ue.position.x - p.x, ue.position.y - p.y) <= 80.0) {
        ++near;
        break;
      }
    }
  }
  // Nine disks of radius 80 m cover about 7% of the area but carry the
  // multiplied density.
  CHECK(static_cast<double>(near) / g.ues.size() > 0.5);
}

TEST_CASE("invalid specs are rejected") {
  ScenarioSpec spec;
  spec.macro_count = 0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
  spec = ScenarioSpec{};
  spec.ue_density_per_km2 = 0.0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
  spec = ScenarioSpec{};
  spec.pico_tx_power_dbm = 70.0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
}

}  // TEST_SUITE
