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

#include "eicic/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eicic/rng.hpp"

namespace eicic::scenario {

namespace {

constexpr std::uint64_t kTopologyStream = 1;
constexpr std::uint64_t kUeStream = 2;
constexpr int kPlacementAttempts = 1000;

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double pathloss_db(const PathLossModel& model, double d, double exponent) {
  d = std::max(d, model.min_distance_m);
  return model.reference_loss_db +
         10.0 * exponent * std::log10(d / model.reference_distance_m);
}

bool inside(const ScenarioSpec& spec, Point p) {
  const double hx = spec.area_width_km * 500.0;
  const double hy = spec.area_height_km * 500.0;
  return p.x >= -hx && p.x <= hx && p.y >= -hy && p.y <= hy;
}

Point uniform_in_area(const ScenarioSpec& spec, Rng& rng) {
  const double hx = spec.area_width_km * 500.0;
  const double hy = spec.area_height_km * 500.0;
  const double x = rng.uniform(-hx, hx);
  const double y = rng.uniform(-hy, hy);
  return {x, y};
}

std::vector<Point> hex_sites(double spacing, std::size_t count) {
  const int reach = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 2;
  struct Site {
    long long ring;  // distance in micrometres
    double angle;
    Point p;
  };
  std::vector<Site> sites;
  const double h = std::sqrt(3.0) / 2.0;
  for (int j = -reach; j <= reach; ++j) {
    for (int i = -reach; i <= reach; ++i) {
      const Point p{spacing * (i + 0.5 * j), spacing * h * j};
      double angle = std::atan2(p.y, p.x);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      sites.push_back({std::llround(std::hypot(p.x, p.y) * 1e6), angle, p});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return a.ring != b.ring ? a.ring < b.ring : a.angle < b.angle;
  });
  std::vector<Point> out;
  for (std::size_t k = 0; k < count && k < sites.size(); ++k) out.push_back(sites[k].p);
  return out;
}

std::vector<Point> place_picos(const ScenarioSpec& spec, const std::vector<Point>& macros,
                               Rng& rng) {
  std::vector<Point> picos;
  switch (spec.pico_placement) {
    case PicoPlacement::kExplicit:
      return spec.pico_positions;
    case PicoPlacement::kRandom:
      for (std::size_t p = 0; p < spec.pico_count; ++p) picos.push_back(uniform_in_area(spec, rng));
      return picos;
    case PicoPlacement::kNearEdge:
      for (std::size_t p = 0; p < spec.pico_count; ++p) {
        Point candidate;
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
          const Point& anchor = macros[rng.index(macros.size())];
          const double r = spec.macro_spacing_m * rng.uniform(0.35, 0.5);
          const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
          candidate = {anchor.x + r * std::cos(theta), anchor.y + r * std::sin(theta)};
          placed = inside(spec, candidate);
        }
        if (!placed) {
          throw GenerationError("could not place pico " + std::to_string(p) +
                                " near a macro cell edge inside the area");
        }
        picos.push_back(candidate);
      }
      return picos;
  }
  return picos;
}

double efficiency(double sinr, const RateModel& model) {
  if (!(sinr > 0.0)) return 0.0;
  if (!model.mcs_table.empty()) {
    const double sinr_db = 10.0 * std::log10(sinr);
    double eta = 0.0;
    for (const auto& [threshold_db, value] : model.mcs_table) {
      if (sinr_db >= threshold_db) eta = value;
    }
    return std::min(eta, model.max_efficiency);
  }
  const double gap = std::pow(10.0, model.snr_gap_db / 10.0);
  return std::min(model.max_efficiency,
                  model.efficiency_factor * std::log2(1.0 + sinr / gap));
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

void validate_spec(const ScenarioSpec& spec) {
  auto fail = [](const std::string& what) { throw GenerationError("invalid scenario: " + what); };
  if (!(spec.area_width_km > 0.0) || !(spec.area_height_km > 0.0)) fail("area must be positive");
  if (spec.macro_layout == MacroLayout::kHexGrid) {
    if (spec.macro_count == 0) fail("zero macros");
    if (!(spec.macro_spacing_m > 0.0)) fail("macro spacing must be positive");
  } else if (spec.macro_positions.empty()) {
    fail("zero macros");
  }
  for (double power : {spec.macro_tx_power_dbm, spec.pico_tx_power_dbm}) {
    if (!(power >= 0.0 && power <= 60.0)) fail("transmit powers must lie in [0, 60] dBm");
  }
  if (!(spec.ue_density_per_km2 > 0.0)) fail("UE density must be positive");
  for (const Hotspot& h : spec.hotspots) {
    if (!(h.density_multiplier > 0.0) || !(h.radius_m > 0.0)) {
      fail("hotspot radius and multiplier must be positive");
    }
    if (h.at_pico) {
      const std::size_t picos = spec.pico_placement == PicoPlacement::kExplicit
                                    ? spec.pico_positions.size()
                                    : spec.pico_count;
      if (*h.at_pico >= picos) fail("hotspot refers to a missing pico");
    }
  }
  if (!(spec.bandwidth_mhz > 0.0)) fail("bandwidth must be positive");
  if (spec.n_sf < 1) fail("n_sf must be >= 1");
  if (!(spec.pathloss.reference_distance_m > 0.0) || !(spec.pathloss.min_distance_m > 0.0)) {
    fail("path-loss distances must be positive");
  }
  if (spec.pathloss.shadowing_sigma_db < 0.0) fail("shadowing sigma must be >= 0");
  if (!(spec.rate.max_efficiency > 0.0) || !(spec.rate.efficiency_factor > 0.0)) {
    fail("rate model efficiencies must be positive");
  }
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double noise_dbm(const ScenarioSpec& spec) {
  return spec.noise_density_dbm_hz + 10.0 * std::log10(spec.bandwidth_mhz * 1e6) +
         spec.noise_figure_db;
}

double sinr_pico(double received_mw, double pico_interference_mw,
                 double macro_interference_mw, double noise_mw, bool abs) {
  const double denominator =
      pico_interference_mw + (abs ? 0.0 : macro_interference_mw) + noise_mw;
  return received_mw / denominator;
}

double sinr_macro(double received_mw, double pico_interference_mw,
                  double macro_interference_mw, double noise_mw) {
  return received_mw / (pico_interference_mw + macro_interference_mw + noise_mw);
}

double rate_from_sinr(double sinr, double bandwidth_hz, const RateModel& model) {
  return bandwidth_hz * 1e-3 * efficiency(sinr, model);
}

double compose_icic_rate(double eta_high, double eta_low, double band_high_hz,
                         double band_low_hz) {
  return (eta_high * band_high_hz + eta_low * band_low_hz) * 1e-3;
}

std::vector<std::vector<std::size_t>> build_interference_graph(const Geometry& geometry,
                                                               double threshold_db) {
  std::vector<std::vector<std::size_t>> graph(geometry.picos.size());
  for (std::size_t p = 0; p < geometry.picos.size(); ++p) {
    for (std::size_t m = 0; m < geometry.macros.size(); ++m) {
      if (geometry.macro_rx_at_pico_dbm[p][m] - geometry.noise_dbm > threshold_db) {
        graph[p].push_back(m);
      }
    }
  }
  return graph;
}

Snapshot generate(const ScenarioSpec& spec) { return generate(spec, spec.rng_seed); }

Snapshot generate(const ScenarioSpec& spec, std::uint64_t ue_seed) {
  validate_spec(spec);
  Snapshot snap;
  Geometry& geo = snap.geometry;
  Rng topology_rng(derive_seed(spec.rng_seed, kTopologyStream));
  Rng ue_rng(derive_seed(ue_seed, kUeStream));

  geo.macros = spec.macro_layout == MacroLayout::kHexGrid
                   ? hex_sites(spec.macro_spacing_m, spec.macro_count)
                   : spec.macro_positions;
  geo.picos = place_picos(spec, geo.macros, topology_rng);
  geo.noise_dbm = noise_dbm(spec);
  const double noise_mw = dbm_to_mw(geo.noise_dbm);
  const std::size_t macros = geo.macros.size();
  const std::size_t picos = geo.picos.size();
  const PathLossModel& pl = spec.pathloss;

  geo.macro_rx_at_pico_dbm.assign(picos, std::vector<double>(macros));
  for (std::size_t p = 0; p < picos; ++p) {
    for (std::size_t m = 0; m < macros; ++m) {
      geo.macro_rx_at_pico_dbm[p][m] =
          spec.macro_tx_power_dbm -
          pathloss_db(pl, distance(geo.picos[p], geo.macros[m]), pl.exponent_macro);
    }
  }

  // UE drop: uniform background plus hotspot surplus.
  std::vector<Point> positions;
  const double area_km2 = spec.area_width_km * spec.area_height_km;
  const std::size_t background =
      spec.ue_count ? *spec.ue_count
                    : static_cast<std::size_t>(std::llround(spec.ue_density_per_km2 * area_km2));
  for (std::size_t k = 0; k < background; ++k) positions.push_back(uniform_in_area(spec, ue_rng));
  for (const Hotspot& h : spec.hotspots) {
    const Point center = h.at_pico ? geo.picos[*h.at_pico] : h.center;
    const double disk_km2 = std::numbers::pi * h.radius_m * h.radius_m * 1e-6;
    const double extra = std::max(0.0, h.density_multiplier - 1.0) * spec.ue_density_per_km2 * disk_km2;
    const auto count = static_cast<std::size_t>(std::llround(extra));
    for (std::size_t k = 0; k < count; ++k) {
      const double r = h.radius_m * std::sqrt(ue_rng.uniform());
      const double theta = ue_rng.uniform(0.0, 2.0 * std::numbers::pi);
      positions.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
    }
  }

  NetworkInstance& inst = snap.instance;
  inst = make_instance(macros, picos, spec.n_sf);
  inst.interferers = build_interference_graph(geo, spec.interference_threshold_db);
  std::vector<std::vector<bool>> in_set(picos, std::vector<bool>(macros, false));
  for (std::size_t p = 0; p < picos; ++p) {
    for (std::size_t m : inst.interferers[p]) in_set[p][m] = true;
  }

  const double bandwidth_hz = spec.bandwidth_mhz * 1e6;
  const double sigma = pl.shadowing_sigma_db;
  std::vector<double> rx_macro(macros), rx_pico(picos);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const Point pos = positions[k];
    std::vector<double> loss_macro(macros), loss_pico(picos);
    for (std::size_t m = 0; m < macros; ++m) {
      loss_macro[m] = pathloss_db(pl, distance(pos, geo.macros[m]), pl.exponent_macro);
      if (sigma > 0.0) loss_macro[m] += ue_rng.normal(0.0, sigma);
      rx_macro[m] = spec.macro_tx_power_dbm - loss_macro[m];
    }
    for (std::size_t p = 0; p < picos; ++p) {
      loss_pico[p] = pathloss_db(pl, distance(pos, geo.picos[p]), pl.exponent_pico);
      if (sigma > 0.0) loss_pico[p] += ue_rng.normal(0.0, sigma);
      rx_pico[p] = spec.pico_tx_power_dbm - loss_pico[p];
    }
    const std::size_t best_macro = static_cast<std::size_t>(
        std::max_element(rx_macro.begin(), rx_macro.end()) - rx_macro.begin());
    if (!(rx_macro[best_macro] > geo.noise_dbm)) {
      throw GenerationError("UE " + std::to_string(k) + " has no macro coverage above the noise floor");
    }
    std::optional<std::size_t> best_pico;
    if (picos > 0) {
      const std::size_t p = static_cast<std::size_t>(
          std::max_element(rx_pico.begin(), rx_pico.end()) - rx_pico.begin());
      if (rx_pico[p] >= rx_macro[best_macro] - spec.pico_window_db) best_pico = p;
    }

    double macro_total = 0.0;
    for (double r : rx_macro) macro_total += dbm_to_mw(r);
    double pico_total = 0.0;
    for (double r : rx_pico) pico_total += dbm_to_mw(r);

    UeRecord ue;
    ue.id = static_cast<std::uint32_t>(k);
    ue.weight = 1.0;
    ue.best_macro = best_macro;
    ue.rsrp_macro = rx_macro[best_macro];
    const double s_macro = dbm_to_mw(rx_macro[best_macro]);
    const double sinr_m = sinr_macro(s_macro, pico_total, macro_total - s_macro, noise_mw);
    ue.rate_macro = rate_from_sinr(sinr_m, bandwidth_hz, spec.rate);

    UeGeometry ug;
    ug.position = pos;
    ug.sinr_macro_db = to_db(sinr_m);
    if (best_pico) {
      const std::size_t p = *best_pico;
      const double s_pico = dbm_to_mw(rx_pico[p]);
      double blanking = 0.0;  // macros that mute during this pico's ABS
      for (std::size_t m = 0; m < macros; ++m) {
        if (in_set[p][m]) blanking += dbm_to_mw(rx_macro[m]);
      }
      const double floor_mw = noise_mw + (macro_total - blanking);
      const double others = pico_total - s_pico;
      const double sinr_abs = sinr_pico(s_pico, others, blanking, floor_mw, true);
      const double sinr_nonabs = sinr_pico(s_pico, others, blanking, floor_mw, false);
      ue.best_pico = p;
      ue.rsrp_pico = rx_pico[p];
      ue.rate_pico_abs = rate_from_sinr(sinr_abs, bandwidth_hz, spec.rate);
      ue.rate_pico_nonabs = rate_from_sinr(sinr_nonabs, bandwidth_hz, spec.rate);
      ug.sinr_pico_abs_db = to_db(sinr_abs);
      ug.sinr_pico_nonabs_db = to_db(sinr_nonabs);
    }
    inst.ues.push_back(ue);
    geo.ues.push_back(ug);
    geo.pathloss_macro_db.push_back(std::move(loss_macro));
    geo.pathloss_pico_db.push_back(std::move(loss_pico));
  }
  validate(inst);
  return snap;
}

}  // namespace eicic::scenario
