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

// Synthetic macro/pico deployments: geometry, log-distance path loss, SINR,
// link rates and the pico interference graph.

#ifndef EICIC_SCENARIO_HPP
#define EICIC_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eicic/model.hpp"

namespace eicic::scenario {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;
};

enum class MacroLayout { kHexGrid, kExplicit };
enum class PicoPlacement { kRandom, kExplicit, kNearEdge };

struct Hotspot {
  Point center;
  double radius_m = 50.0;
  double density_multiplier = 5.0;
  // When set, the hotspot is centred on this pico instead of `center`.
  std::optional<std::size_t> at_pico;
};

struct PathLossModel {
  double reference_loss_db = 38.0;  // at reference_distance_m
  double reference_distance_m = 1.0;
  double exponent_macro = 3.5;
  double exponent_pico = 3.0;
  double shadowing_sigma_db = 0.0;
  double min_distance_m = 10.0;
};

struct RateModel {
  double snr_gap_db = 3.0;
  double efficiency_factor = 1.0;
  double max_efficiency = 6.0;  // bps/Hz
  // Optional step table of (SINR threshold dB, bps/Hz), ascending. When
  // nonempty it replaces the gap-adjusted Shannon curve.
  std::vector<std::pair<double, double>> mcs_table;
};

struct ScenarioSpec {
  double area_width_km = 1.5;
  double area_height_km = 1.5;  // centred on the origin
  MacroLayout macro_layout = MacroLayout::kHexGrid;
  double macro_spacing_m = 500.0;
  std::size_t macro_count = 7;  // hex grid: the sites closest to the origin
  std::vector<Point> macro_positions;
  double macro_tx_power_dbm = 45.0;
  std::size_t pico_count = 4;
  PicoPlacement pico_placement = PicoPlacement::kNearEdge;
  std::vector<Point> pico_positions;
  double pico_tx_power_dbm = 30.0;
  double ue_density_per_km2 = 450.0;
  std::optional<std::size_t> ue_count;  // replaces the density-based count
  std::vector<Hotspot> hotspots;
  double bandwidth_mhz = 10.0;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 9.0;
  PathLossModel pathloss;
  RateModel rate;
  double interference_threshold_db = 6.0;
  double pico_window_db = 15.0;  // max RSRP deficit for a candidate pico
  int n_sf = 40;
  std::uint64_t rng_seed = 1;
  // Documented only: how often a live deployment would push new parameters.
  double min_reconfig_interval_s = 300.0;
};

void validate_spec(const ScenarioSpec& spec);

struct UeGeometry {
  Point position;
  double sinr_macro_db = 0.0;
  std::optional<double> sinr_pico_abs_db;
  std::optional<double> sinr_pico_nonabs_db;
};

struct Geometry {
  std::vector<Point> macros;
  std::vector<Point> picos;
  std::vector<UeGeometry> ues;
  std::vector<std::vector<double>> pathloss_macro_db;  // [ue][macro]
  std::vector<std::vector<double>> pathloss_pico_db;   // [ue][pico]
  std::vector<std::vector<double>> macro_rx_at_pico_dbm;  // [pico][macro]
  double noise_dbm = 0.0;
};

struct Snapshot {
  NetworkInstance instance;
  Geometry geometry;
};

// Deterministic in (spec, ue_seed); the topology (cell sites) depends only
// on spec.rng_seed so repeated drops share cells.
Snapshot generate(const ScenarioSpec& spec);
Snapshot generate(const ScenarioSpec& spec, std::uint64_t ue_seed);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double noise_dbm(const ScenarioSpec& spec);

// Linear SINR at a pico UE. The ABS branch drops the macro interference.
double sinr_pico(double received_mw, double pico_interference_mw,
                 double macro_interference_mw, double noise_mw, bool abs);
double sinr_macro(double received_mw, double pico_interference_mw,
                  double macro_interference_mw, double noise_mw);

// Bits per 1 ms subframe.
double rate_from_sinr(double sinr, double bandwidth_hz, const RateModel& model = {});

// Rate of a UE served on a high-SINR and a low-SINR band, bits per subframe.
double compose_icic_rate(double eta_high, double eta_low, double band_high_hz,
                         double band_low_hz);

// I_p from the geometry: macro m interferes with pico p when its received
// power at the pico exceeds the noise floor by `threshold_db`.
std::vector<std::vector<std::size_t>> build_interference_graph(const Geometry& geometry,
                                                               double threshold_db);

}  // namespace eicic::scenario

#endif  // EICIC_SCENARIO_HPP
