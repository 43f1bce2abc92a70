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

#include "eicic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"

namespace eicic::io {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw IoError(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T get(const Json& doc, const char* key) {
  try {
    return field(doc, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("field '") + key + "': " + e.what());
  }
}

void check_schema(const Json& doc, const char* schema) {
  const std::string found = get<std::string>(doc, "schema");
  if (found != schema) {
    throw IoError("expected schema " + std::string(schema) + ", found " + found);
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_neg_inf(const Json& v) {
  if (v.is_null()) return kNegInf;
  if (!v.is_number()) throw IoError("expected a number or null");
  return v.get<double>();
}

const char* association_name(Association a) {
  return a == Association::kPico ? "pico" : "macro";
}

Association parse_association(const std::string& s) {
  if (s == "macro") return Association::kMacro;
  if (s == "pico") return Association::kPico;
  throw IoError("unknown association '" + s + "'");
}

// Flattened spec: dotted key -> one or more textual values.
using KeyValues = std::map<std::string, std::vector<std::string>>;

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError("spec key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

template <typename T = long long>
T parse_integer(const std::string& key, const std::string& text) {
  T v = 0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError("spec key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

class SpecReader {
 public:
  explicit SpecReader(KeyValues values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::vector<std::string>& list(const std::string& key) {
    used_.insert(key);
    return values_.at(key);
  }

  const std::string& scalar(const std::string& key) {
    const auto& v = list(key);
    if (v.size() != 1) throw IoError("spec key '" + key + "' expects one value");
    return v.front();
  }

  void real(const std::string& key, double& out) {
    if (has(key)) out = parse_double(key, scalar(key));
  }

  void count(const std::string& key, std::size_t& out) {
    if (!has(key)) return;
    const long long v = parse_integer(key, scalar(key));
    if (v < 0) throw IoError("spec key '" + key + "' must be nonnegative");
    out = static_cast<std::size_t>(v);
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    for (const std::string& s : list(key)) out.push_back(parse_double(key, s));
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, _] : values_) {
      if (!used_.count(key)) throw IoError("unknown spec key '" + key + "'");
    }
  }

 private:
  KeyValues values_;
  std::set<std::string> used_;
};

std::vector<scenario::Point> points(SpecReader& r, const std::string& prefix) {
  const auto xs = r.reals(prefix + "_x");
  const auto ys = r.reals(prefix + "_y");
  if (xs.size() != ys.size()) {
    throw IoError("spec keys " + prefix + "_x and " + prefix + "_y differ in length");
  }
  std::vector<scenario::Point> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({xs[i], ys[i]});
  return out;
}

scenario::ScenarioSpec spec_from_values(KeyValues values) {
  SpecReader r(std::move(values));
  scenario::ScenarioSpec spec;
  r.real("area_width_km", spec.area_width_km);
  r.real("area_height_km", spec.area_height_km);
  if (r.has("macro_layout")) {
    const std::string& v = r.scalar("macro_layout");
    if (v == "hex") {
      spec.macro_layout = scenario::MacroLayout::kHexGrid;
    } else if (v == "explicit") {
      spec.macro_layout = scenario::MacroLayout::kExplicit;
    } else {
      throw IoError("macro_layout must be 'hex' or 'explicit'");
    }
  }
  r.real("macro_spacing_m", spec.macro_spacing_m);
  r.count("macro_count", spec.macro_count);
  spec.macro_positions = points(r, "macro");
  r.real("macro_tx_power_dbm", spec.macro_tx_power_dbm);
  r.count("pico_count", spec.pico_count);
  if (r.has("pico_placement")) {
    const std::string& v = r.scalar("pico_placement");
    if (v == "random") {
      spec.pico_placement = scenario::PicoPlacement::kRandom;
    } else if (v == "explicit") {
      spec.pico_placement = scenario::PicoPlacement::kExplicit;
    } else if (v == "near-edge") {
      spec.pico_placement = scenario::PicoPlacement::kNearEdge;
    } else {
      throw IoError("pico_placement must be 'random', 'explicit' or 'near-edge'");
    }
  }
  spec.pico_positions = points(r, "pico");
  r.real("pico_tx_power_dbm", spec.pico_tx_power_dbm);
  r.real("ue_density_per_km2", spec.ue_density_per_km2);
  if (r.has("ue_count")) {
    std::size_t n = 0;
    r.count("ue_count", n);
    spec.ue_count = n;
  }
  r.real("bandwidth_mhz", spec.bandwidth_mhz);
  r.real("noise_density_dbm_hz", spec.noise_density_dbm_hz);
  r.real("noise_figure_db", spec.noise_figure_db);
  r.real("interference_threshold_db", spec.interference_threshold_db);
  r.real("pico_window_db", spec.pico_window_db);
  if (r.has("n_sf")) {
    const long long n = parse_integer("n_sf", r.scalar("n_sf"));
    if (n < 1 || n > 10000) throw IoError("n_sf must lie in [1, 10000]");
    spec.n_sf = static_cast<int>(n);
  }
  if (r.has("rng_seed")) {
    spec.rng_seed = parse_integer<std::uint64_t>("rng_seed", r.scalar("rng_seed"));
  }
  r.real("min_reconfig_interval_s", spec.min_reconfig_interval_s);

  r.real("pathloss.reference_loss_db", spec.pathloss.reference_loss_db);
  r.real("pathloss.reference_distance_m", spec.pathloss.reference_distance_m);
  r.real("pathloss.exponent_macro", spec.pathloss.exponent_macro);
  r.real("pathloss.exponent_pico", spec.pathloss.exponent_pico);
  r.real("pathloss.shadowing_sigma_db", spec.pathloss.shadowing_sigma_db);
  r.real("pathloss.min_distance_m", spec.pathloss.min_distance_m);

  r.real("rate.snr_gap_db", spec.rate.snr_gap_db);
  r.real("rate.efficiency_factor", spec.rate.efficiency_factor);
  r.real("rate.max_efficiency", spec.rate.max_efficiency);
  const auto mcs_sinr = r.reals("rate.mcs_sinr_db");
  const auto mcs_eff = r.reals("rate.mcs_efficiency");
  if (mcs_sinr.size() != mcs_eff.size()) {
    throw IoError("rate.mcs_sinr_db and rate.mcs_efficiency differ in length");
  }
  for (std::size_t i = 0; i < mcs_sinr.size(); ++i) {
    spec.rate.mcs_table.emplace_back(mcs_sinr[i], mcs_eff[i]);
  }

  // Hotspots: radius and multiplier are required per entry; an entry sits at
  // a pico when hotspots.at_pico is >= 0, otherwise at (x, y).
  const auto radius = r.reals("hotspots.radius_m");
  const auto mult = r.reals("hotspots.density_multiplier");
  const auto hx = r.reals("hotspots.x");
  const auto hy = r.reals("hotspots.y");
  const auto at = r.reals("hotspots.at_pico");
  const std::size_t n_hot = radius.size();
  if (mult.size() != n_hot || (!hx.empty() && hx.size() != n_hot) ||
      (!hy.empty() && hy.size() != n_hot) || (!at.empty() && at.size() != n_hot)) {
    throw IoError("hotspot arrays differ in length");
  }
  for (std::size_t i = 0; i < n_hot; ++i) {
    scenario::Hotspot h;
    h.radius_m = radius[i];
    h.density_multiplier = mult[i];
    if (!at.empty() && at[i] >= 0.0) {
      h.at_pico = static_cast<std::size_t>(at[i]);
    } else {
      if (hx.empty() || hy.empty()) {
        throw IoError("hotspot " + std::to_string(i) + " needs x/y or at_pico");
      }
      h.center = {hx[i], hy[i]};
    }
    spec.hotspots.push_back(h);
  }
  r.reject_unused();
  return spec;
}

void flatten(const Json& doc, const std::string& prefix, KeyValues& out) {
  for (const auto& [key, value] : doc.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
      continue;
    }
    auto text = [&](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number() || v.is_boolean()) return v.dump();
      throw IoError("spec key '" + name + "' has an unsupported value");
    };
    std::vector<std::string> values;
    if (value.is_array()) {
      for (const Json& v : value) values.push_back(text(v));
    } else {
      values.push_back(text(value));
    }
    out[name] = std::move(values);
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

Json instance_to_json(const NetworkInstance& instance) {
  Json doc;
  doc["schema"] = kInstanceSchema;
  doc["n_sf"] = instance.n_sf;
  Json macros = Json::array();
  for (const CellId& c : instance.macros) macros.push_back(c.index);
  Json picos = Json::array();
  for (const CellId& c : instance.picos) picos.push_back(c.index);
  doc["macros"] = macros;
  doc["picos"] = picos;
  doc["interferers"] = instance.interferers;
  Json ues = Json::array();
  for (const UeRecord& ue : instance.ues) {
    Json u;
    u["id"] = ue.id;
    u["weight"] = ue.weight;
    u["best_macro"] = ue.best_macro;
    u["best_pico"] = ue.best_pico ? Json(*ue.best_pico) : Json(nullptr);
    u["rate_macro"] = ue.rate_macro;
    u["rate_pico_abs"] = ue.rate_pico_abs;
    u["rate_pico_nonabs"] = ue.rate_pico_nonabs;
    u["rsrp_macro"] = ue.rsrp_macro;
    u["rsrp_pico"] = ue.rsrp_pico ? Json(*ue.rsrp_pico) : Json(nullptr);
    ues.push_back(std::move(u));
  }
  doc["ues"] = std::move(ues);
  return doc;
}

NetworkInstance instance_from_json(const Json& doc) {
  check_schema(doc, kInstanceSchema);
  NetworkInstance instance;
  instance.n_sf = get<int>(doc, "n_sf");
  for (const Json& m : field(doc, "macros")) {
    instance.macros.push_back({CellKind::kMacro, m.get<std::uint32_t>()});
  }
  for (const Json& p : field(doc, "picos")) {
    instance.picos.push_back({CellKind::kPico, p.get<std::uint32_t>()});
  }
  instance.interferers = get<std::vector<std::vector<std::size_t>>>(doc, "interferers");
  for (const Json& u : field(doc, "ues")) {
    UeRecord ue;
    ue.id = get<std::uint32_t>(u, "id");
    ue.weight = get<double>(u, "weight");
    ue.best_macro = get<std::size_t>(u, "best_macro");
    if (!field(u, "best_pico").is_null()) ue.best_pico = get<std::size_t>(u, "best_pico");
    ue.rate_macro = get<double>(u, "rate_macro");
    ue.rate_pico_abs = get<double>(u, "rate_pico_abs");
    ue.rate_pico_nonabs = get<double>(u, "rate_pico_nonabs");
    ue.rsrp_macro = get<double>(u, "rsrp_macro");
    if (!field(u, "rsrp_pico").is_null()) ue.rsrp_pico = get<double>(u, "rsrp_pico");
    instance.ues.push_back(ue);
  }
  try {
    validate(instance);
  } catch (const InvalidInstance& e) {
    throw IoError(std::string("invalid instance: ") + e.what());
  }
  return instance;
}

Json allocation_to_json(const Allocation& allocation) {
  Json doc;
  doc["schema"] = kAllocationSchema;
  Json assoc = Json::array();
  for (Association a : allocation.association) assoc.push_back(association_name(a));
  doc["association"] = std::move(assoc);
  doc["abs_pico"] = allocation.abs_pico;
  doc["nonabs_macro"] = allocation.nonabs_macro;
  doc["x"] = allocation.x;
  doc["y_abs"] = allocation.y_abs;
  doc["y_nonabs"] = allocation.y_nonabs;
  doc["throughput"] = allocation.throughput;
  doc["utility"] = number_or_null(allocation.utility);
  return doc;
}

Allocation allocation_from_json(const Json& doc) {
  check_schema(doc, kAllocationSchema);
  Allocation a;
  for (const Json& s : field(doc, "association")) {
    a.association.push_back(parse_association(s.get<std::string>()));
  }
  a.abs_pico = get<std::vector<int>>(doc, "abs_pico");
  a.nonabs_macro = get<std::vector<int>>(doc, "nonabs_macro");
  a.x = get<std::vector<double>>(doc, "x");
  a.y_abs = get<std::vector<double>>(doc, "y_abs");
  a.y_nonabs = get<std::vector<double>>(doc, "y_nonabs");
  a.throughput = get<std::vector<double>>(doc, "throughput");
  a.utility = number_or_neg_inf(field(doc, "utility"));
  return a;
}

Json bias_to_json(const bias::BiasAssignment& assignment) {
  Json doc;
  doc["schema"] = kBiasSchema;
  doc["pico_bias_db"] = assignment.pico_bias_db;
  doc["squared_error"] = assignment.squared_error;
  doc["min_db"] = assignment.min_db;
  doc["max_db"] = assignment.max_db;
  return doc;
}

Json pattern_to_json(const bias::AbsPattern& pattern) {
  Json doc;
  doc["schema"] = kPatternSchema;
  Json macros = Json::array();
  for (const auto& bits : pattern.macro_blank) macros.push_back(bias::AbsPattern::bits(bits));
  Json picos = Json::array();
  for (const auto& bits : pattern.pico_usable) picos.push_back(bias::AbsPattern::bits(bits));
  doc["macro_blank"] = std::move(macros);
  doc["pico_usable"] = std::move(picos);
  return doc;
}

void write_allocation_csv(std::ostream& out, const Allocation& allocation) {
  out << "ue,association,x,y_abs,y_nonabs,throughput\n";
  for (std::size_t u = 0; u < allocation.association.size(); ++u) {
    out << u << ',' << association_name(allocation.association[u]) << ','
        << format_double(allocation.x[u]) << ',' << format_double(allocation.y_abs[u]) << ','
        << format_double(allocation.y_nonabs[u]) << ','
        << format_double(allocation.throughput[u]) << '\n';
  }
}

void write_geometry_csv(std::ostream& out, const scenario::Snapshot& snapshot) {
  const auto& ues = snapshot.instance.ues;
  const auto& geo = snapshot.geometry.ues;
  auto optional = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << "ue_id,x,y,best_macro,best_pico,sinr_macro_db,sinr_pico_abs_db,sinr_pico_nonabs_db\n";
  for (std::size_t u = 0; u < ues.size(); ++u) {
    out << ues[u].id << ',' << format_double(geo[u].position.x) << ','
        << format_double(geo[u].position.y) << ',' << ues[u].best_macro << ','
        << (ues[u].best_pico ? std::to_string(*ues[u].best_pico) : std::string()) << ','
        << format_double(geo[u].sinr_macro_db) << ',' << optional(geo[u].sinr_pico_abs_db)
        << ',' << optional(geo[u].sinr_pico_nonabs_db) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<solver::TracePoint>& trace) {
  out << "iteration,dual_cost,averaged_primal_utility\n";
  for (const auto& t : trace) {
    out << t.iteration << ',' << format_double(t.dual_cost) << ','
        << format_double(t.averaged_primal_utility) << '\n';
  }
}

scenario::ScenarioSpec spec_from_toml(std::istream& in) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw IoError(std::string("malformed spec: ") + e.what());
  }
  KeyValues values;
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::vector<std::string> inputs;
    for (const std::string& s : item.inputs) {
      if (s.empty()) continue;
      inputs.push_back(s);
    }
    values[item.fullname()] = std::move(inputs);
  }
  return spec_from_values(std::move(values));
}

scenario::ScenarioSpec spec_from_json(const Json& doc) {
  if (!doc.is_object()) throw IoError("spec must be a JSON object");
  KeyValues values;
  flatten(doc, "", values);
  return spec_from_values(std::move(values));
}

scenario::ScenarioSpec read_spec(const std::filesystem::path& path) {
  if (path.extension() == ".json") return spec_from_json(read_json(path));
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec " + path.string());
  return spec_from_toml(in);
}

Json spec_to_json(const scenario::ScenarioSpec& spec) {
  Json doc;
  doc["area_width_km"] = spec.area_width_km;
  doc["area_height_km"] = spec.area_height_km;
  doc["macro_layout"] = spec.macro_layout == scenario::MacroLayout::kHexGrid ? "hex" : "explicit";
  doc["macro_spacing_m"] = spec.macro_spacing_m;
  doc["macro_count"] = spec.macro_count;
  doc["macro_tx_power_dbm"] = spec.macro_tx_power_dbm;
  doc["pico_count"] = spec.pico_count;
  switch (spec.pico_placement) {
    case scenario::PicoPlacement::kRandom: doc["pico_placement"] = "random"; break;
    case scenario::PicoPlacement::kExplicit: doc["pico_placement"] = "explicit"; break;
    case scenario::PicoPlacement::kNearEdge: doc["pico_placement"] = "near-edge"; break;
  }
  auto xy = [&](const std::vector<scenario::Point>& pts, const std::string& prefix) {
    if (pts.empty()) return;
    Json xs = Json::array();
    Json ys = Json::array();
    for (const auto& p : pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    doc[prefix + "_x"] = xs;
    doc[prefix + "_y"] = ys;
  };
  xy(spec.macro_positions, "macro");
  xy(spec.pico_positions, "pico");
  doc["pico_tx_power_dbm"] = spec.pico_tx_power_dbm;
  doc["ue_density_per_km2"] = spec.ue_density_per_km2;
  if (spec.ue_count) doc["ue_count"] = *spec.ue_count;
  doc["bandwidth_mhz"] = spec.bandwidth_mhz;
  doc["noise_density_dbm_hz"] = spec.noise_density_dbm_hz;
  doc["noise_figure_db"] = spec.noise_figure_db;
  doc["interference_threshold_db"] = spec.interference_threshold_db;
  doc["pico_window_db"] = spec.pico_window_db;
  doc["n_sf"] = spec.n_sf;
  doc["rng_seed"] = spec.rng_seed;
  doc["min_reconfig_interval_s"] = spec.min_reconfig_interval_s;
  doc["pathloss"] = {
      {"reference_loss_db", spec.pathloss.reference_loss_db},
      {"reference_distance_m", spec.pathloss.reference_distance_m},
      {"exponent_macro", spec.pathloss.exponent_macro},
      {"exponent_pico", spec.pathloss.exponent_pico},
      {"shadowing_sigma_db", spec.pathloss.shadowing_sigma_db},
      {"min_distance_m", spec.pathloss.min_distance_m},
  };
  Json rate = {
      {"snr_gap_db", spec.rate.snr_gap_db},
      {"efficiency_factor", spec.rate.efficiency_factor},
      {"max_efficiency", spec.rate.max_efficiency},
  };
  if (!spec.rate.mcs_table.empty()) {
    Json s = Json::array();
    Json e = Json::array();
    for (const auto& [sinr, eff] : spec.rate.mcs_table) {
      s.push_back(sinr);
      e.push_back(eff);
    }
    rate["mcs_sinr_db"] = s;
    rate["mcs_efficiency"] = e;
  }
  doc["rate"] = rate;
  if (!spec.hotspots.empty()) {
    Json hs = {{"x", Json::array()}, {"y", Json::array()}, {"radius_m", Json::array()},
               {"density_multiplier", Json::array()}, {"at_pico", Json::array()}};
    for (const auto& h : spec.hotspots) {
      hs["x"].push_back(h.center.x);
      hs["y"].push_back(h.center.y);
      hs["radius_m"].push_back(h.radius_m);
      hs["density_multiplier"].push_back(h.density_multiplier);
      hs["at_pico"].push_back(h.at_pico ? static_cast<long long>(*h.at_pico) : -1LL);
    }
    doc["hotspots"] = hs;
  }
  return doc;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace eicic::io
