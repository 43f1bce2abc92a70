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

#include "eicic/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "eicic/baselines.hpp"
#include "eicic/oracle.hpp"
#include "eicic/parallel.hpp"
#include "eicic/rng.hpp"
#include "eicic/rounding.hpp"

namespace eicic::evaluate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double nearest_grid_value(double value, const std::vector<double>& grid) {
  double best = grid.front();
  for (double g : grid) {
    if (std::abs(g - value) < std::abs(best - value)) best = g;
  }
  return best;
}

bool passes(UeFilter filter, bool pico_area) {
  switch (filter) {
    case UeFilter::kAll: return true;
    case UeFilter::kPicoArea: return pico_area;
    case UeFilter::kNonPicoArea: return !pico_area;
  }
  return false;
}

std::vector<double> pooled_mbps(const std::vector<SnapshotResult>& snapshots, std::size_t scheme,
                                UeFilter filter) {
  std::vector<double> out;
  for (const SnapshotResult& s : snapshots) {
    const auto& tp = s.schemes.at(scheme).allocation.throughput;
    for (std::size_t u = 0; u < tp.size(); ++u) {
      if (passes(filter, s.pico_area[u])) out.push_back(to_mbps(tp[u], s.n_sf));
    }
  }
  return out;
}

std::size_t scheme_index(const SnapshotResult& s, const std::string& name) {
  for (std::size_t i = 0; i < s.schemes.size(); ++i) {
    if (s.schemes[i].scheme == name) return i;
  }
  throw std::invalid_argument("scheme " + name + " was not evaluated");
}

}  // namespace

ProposedResult run_proposed(const NetworkInstance& instance, const PipelineConfig& config,
                            std::uint64_t seed) {
  ProposedResult out;
  const NetworkInstance work =
      bias::bias_constrained_preprocess(instance, config.grid.min_db, config.grid.max_db);
  out.relaxed = solver::solve_relaxed(work, config.solver, seed);
  out.allocation = rounding::round_solution(out.relaxed.z_avg, work);
  const FeasibilityReport report = check_feasibility(out.allocation, instance);
  if (!report.ok()) {
    throw PipelineError(seed, "rounded allocation is infeasible: " + report.to_string());
  }
  out.bias = bias::fit_bias(out.allocation.association, instance, config.grid);
  out.pattern = bias::to_patterns(out.allocation.abs_pico, out.allocation.nonabs_macro, instance);
  out.upper_bound = solver::relaxed_upper_bound(out.relaxed);
  out.gap = oracle::optimality_gap_from_utility(out.allocation.utility, out.upper_bound,
                                                total_weight(instance));
  return out;
}

std::string Scheme::name() const {
  switch (kind) {
    case Kind::kProposed: return "proposed";
    case Kind::kLocalOpt: return "local-opt";
    case Kind::kFixed: return "fixed-" + std::to_string(abs_count) + "-" + io::format_double(bias_db);
    case Kind::kNoEicic: return "no-eicic";
    case Kind::kNoPico: return "no-pico";
  }
  return "";
}

Scheme Scheme::parse(const std::string& name) {
  Scheme s;
  if (name == "proposed") return s;
  if (name == "local-opt") {
    s.kind = Kind::kLocalOpt;
    return s;
  }
  if (name == "no-eicic") {
    s.kind = Kind::kNoEicic;
    return s;
  }
  if (name == "no-pico") {
    s.kind = Kind::kNoPico;
    return s;
  }
  const std::string prefix = "fixed-";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    const auto dash = rest.find('-');
    if (dash != std::string::npos) {
      const std::string a = rest.substr(0, dash);
      const std::string b = rest.substr(dash + 1);
      int abs_count = 0;
      double bias_db = 0.0;
      const auto ra = std::from_chars(a.data(), a.data() + a.size(), abs_count);
      const auto rb = std::from_chars(b.data(), b.data() + b.size(), bias_db);
      if (ra.ec == std::errc() && ra.ptr == a.data() + a.size() && rb.ec == std::errc() &&
          rb.ptr == b.data() + b.size() && abs_count >= 0) {
        s.kind = Kind::kFixed;
        s.abs_count = abs_count;
        s.bias_db = bias_db;
        return s;
      }
    }
  }
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<Scheme> default_schemes() {
  std::vector<Scheme> out;
  for (const char* name : {"proposed", "local-opt", "fixed-5-5", "fixed-10-7.5", "fixed-15-10",
                           "fixed-15-15", "no-eicic", "no-pico"}) {
    out.push_back(Scheme::parse(name));
  }
  return out;
}

SnapshotResult evaluate_instance(const NetworkInstance& instance,
                                 const std::vector<Scheme>& schemes,
                                 const PipelineConfig& config, std::uint64_t solver_seed) {
  SnapshotResult out;
  out.solver_seed = solver_seed;
  out.n_sf = instance.n_sf;
  for (const UeRecord& ue : instance.ues) out.pico_area.push_back(ue.has_pico());
  for (const Scheme& scheme : schemes) {
    SchemeOutcome outcome;
    outcome.scheme = scheme.name();
    switch (scheme.kind) {
      case Scheme::Kind::kProposed:
        out.proposed = run_proposed(instance, config, solver_seed);
        outcome.allocation = out.proposed->allocation;
        break;
      case Scheme::Kind::kLocalOpt:
        outcome.allocation = baselines::local_optimal_heuristic(instance, config.grid).allocation;
        break;
      case Scheme::Kind::kFixed:
        outcome.allocation = baselines::fixed_eicic(scheme.abs_count, scheme.bias_db, instance);
        break;
      case Scheme::Kind::kNoEicic:
        outcome.allocation = baselines::no_eicic(instance);
        break;
      case Scheme::Kind::kNoPico:
        outcome.allocation = baselines::no_pico(instance);
        break;
    }
    out.schemes.push_back(std::move(outcome));
  }
  return out;
}

AveragedParameters average_parameters(const std::vector<SnapshotResult>& snapshots,
                                      const NetworkInstance& topology,
                                      const bias::BiasGrid& grid) {
  AveragedParameters out;
  const std::size_t macros = topology.num_macros();
  const std::size_t picos = topology.num_picos();
  std::vector<double> abs(picos, 0.0), nonabs(macros, 0.0), bias_db(picos, 0.0);
  std::size_t count = 0;
  for (const SnapshotResult& s : snapshots) {
    if (!s.proposed) continue;
    const Allocation& a = s.proposed->allocation;
    if (a.abs_pico.size() != picos || a.nonabs_macro.size() != macros) {
      throw std::invalid_argument("snapshots disagree on the cell layout");
    }
    for (std::size_t p = 0; p < picos; ++p) {
      abs[p] += a.abs_pico[p];
      bias_db[p] += s.proposed->bias.pico_bias_db[p];
    }
    for (std::size_t m = 0; m < macros; ++m) nonabs[m] += a.nonabs_macro[m];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("no proposed results to average");
  const int n_sf = topology.n_sf;
  const std::vector<double> values = grid.values();
  for (std::size_t p = 0; p < picos; ++p) {
    out.abs_pico.push_back(rounding::rnd(abs[p] / static_cast<double>(count), n_sf));
    out.pico_bias_db.push_back(nearest_grid_value(bias_db[p] / static_cast<double>(count), values));
  }
  for (std::size_t m = 0; m < macros; ++m) {
    out.nonabs_macro.push_back(rounding::rnd(nonabs[m] / static_cast<double>(count), n_sf));
  }
  out.repairs = rounding::repair_interference(out.abs_pico, out.nonabs_macro, topology).size();
  return out;
}

MonteCarloResult monte_carlo(const scenario::ScenarioSpec& spec, std::size_t snapshots,
                             const std::vector<Scheme>& schemes, const PipelineConfig& config,
                             std::uint64_t seed, int jobs) {
  if (snapshots < 1) throw std::invalid_argument("at least one snapshot is required");
  MonteCarloResult out;
  out.snapshots.resize(snapshots);
  std::vector<NetworkInstance> first(1);
  PipelineConfig inner = config;
  inner.solver.jobs = 1;
  parallel_for(snapshots, jobs, [&](std::size_t k) {
    const std::uint64_t ue_seed = derive_seed(seed, 2 * k);
    const std::uint64_t solver_seed = derive_seed(seed, 2 * k + 1);
    try {
      const scenario::Snapshot snap = scenario::generate(spec, ue_seed);
      out.snapshots[k] = evaluate_instance(snap.instance, schemes, inner, solver_seed);
      out.snapshots[k].ue_seed = ue_seed;
      if (k == 0) first[0] = snap.instance;
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(ue_seed, "snapshot " + std::to_string(k) + " (ue seed " +
                                       std::to_string(ue_seed) + "): " + e.what());
    }
  });
  const bool has_proposed = std::any_of(schemes.begin(), schemes.end(), [](const Scheme& s) {
    return s.kind == Scheme::Kind::kProposed;
  });
  if (has_proposed) out.averaged = average_parameters(out.snapshots, first[0], config.grid);
  return out;
}

const char* filter_name(UeFilter filter) {
  switch (filter) {
    case UeFilter::kAll: return "all";
    case UeFilter::kPicoArea: return "pico-area";
    case UeFilter::kNonPicoArea: return "non-pico-area";
  }
  return "";
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw std::invalid_argument("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double to_mbps(double bits_per_period, int n_sf) {
  return bits_per_period / (static_cast<double>(n_sf) * 1e-3) / 1e6;
}

std::vector<PercentileRow> percentile_report(const std::vector<SnapshotResult>& snapshots,
                                             const std::vector<double>& percentiles,
                                             const std::vector<UeFilter>& filters) {
  if (snapshots.empty()) throw std::invalid_argument("no snapshots to report");
  std::vector<PercentileRow> rows;
  const SnapshotResult& head = snapshots.front();
  for (std::size_t s = 0; s < head.schemes.size(); ++s) {
    for (UeFilter filter : filters) {
      const std::vector<double> sample = pooled_mbps(snapshots, s, filter);
      for (double q : percentiles) {
        PercentileRow row;
        row.scheme = head.schemes[s].scheme;
        row.filter = filter;
        row.percentile = q;
        row.count = sample.size();
        if (!sample.empty()) row.mbps = percentile(sample, q);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<UtilityRow> utility_table(const std::vector<SnapshotResult>& snapshots) {
  std::vector<UtilityRow> rows;
  if (snapshots.empty()) return rows;
  for (std::size_t s = 0; s < snapshots.front().schemes.size(); ++s) {
    UtilityRow row;
    row.scheme = snapshots.front().schemes[s].scheme;
    double sum = 0.0;
    for (const SnapshotResult& snap : snapshots) {
      const double u = snap.schemes.at(s).allocation.utility;
      row.per_snapshot.push_back(u);
      sum += u;
    }
    row.mean_utility = std::isfinite(sum) ? sum / static_cast<double>(snapshots.size()) : kNegInf;
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "pico_power") return SweepAxis::kPicoPower;
  if (name == "ue_density") return SweepAxis::kUeDensity;
  throw std::invalid_argument("axis must be pico_power or ue_density");
}

const char* axis_name(SweepAxis axis) {
  return axis == SweepAxis::kPicoPower ? "pico_power" : "ue_density";
}

std::vector<double> default_sweep_values(SweepAxis axis) {
  if (axis == SweepAxis::kPicoPower) return {36.0, 30.0, 27.0};
  return {450.0, 225.0, 125.0};
}

std::vector<SweepRow> sweep(const scenario::ScenarioSpec& base, SweepAxis axis,
                            const std::vector<double>& values, std::size_t snapshots,
                            const std::vector<Scheme>& schemes, const PipelineConfig& config,
                            std::uint64_t seed, int jobs) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<Scheme> run = schemes;
  for (const char* needed : {"proposed", "no-eicic"}) {
    const bool present = std::any_of(run.begin(), run.end(),
                                     [&](const Scheme& s) { return s.name() == needed; });
    if (!present) run.push_back(Scheme::parse(needed));
  }
  std::vector<SweepRow> rows;
  for (double value : values) {
    scenario::ScenarioSpec spec = base;
    if (axis == SweepAxis::kPicoPower) {
      spec.pico_tx_power_dbm = value;
    } else {
      spec.ue_density_per_km2 = value;
      spec.ue_count.reset();
    }
    const MonteCarloResult mc = monte_carlo(spec, snapshots, run, config, seed, jobs);
    SweepRow row;
    row.value = value;
    const std::size_t prop = scheme_index(mc.snapshots.front(), "proposed");
    const std::size_t none = scheme_index(mc.snapshots.front(), "no-eicic");
    for (UeFilter filter : {UeFilter::kPicoArea, UeFilter::kAll}) {
      const auto a = pooled_mbps(mc.snapshots, prop, filter);
      const auto b = pooled_mbps(mc.snapshots, none, filter);
      auto& gains = filter == UeFilter::kPicoArea ? row.pico_area_gain : row.all_gain;
      for (double q : kSweepPercentiles) {
        if (a.empty() || b.empty()) {
          gains.push_back(std::numeric_limits<double>::quiet_NaN());
          continue;
        }
        gains.push_back(percentile(a, q) / percentile(b, q) - 1.0);
      }
    }
    row.utilities = utility_table(mc.snapshots);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

io::Json pipeline_to_json(const PipelineConfig& config) {
  const solver::SolverConfig& s = config.solver;
  io::Json doc;
  doc["epsilon"] = s.epsilon;
  doc["step_size"] = s.step_size ? io::Json(*s.step_size) : io::Json(nullptr);
  doc["iterations"] = s.iterations ? io::Json(*s.iterations) : io::Json(nullptr);
  doc["max_iterations"] = s.max_iterations;
  doc["decompose"] = s.decompose;
  doc["warm_start"] = s.warm_start;
  doc["rate_unit"] = s.rate_unit == solver::RateUnit::kTypicalLink ? "typical-link" : "max-link";
  doc["bias_min_db"] = config.grid.min_db;
  doc["bias_max_db"] = config.grid.max_db;
  doc["bias_step_db"] = config.grid.step_db;
  return doc;
}

void write_reports(const std::filesystem::path& dir, const MonteCarloResult& result,
                   const std::vector<double>& percentiles, const io::Json& metadata) {
  std::filesystem::create_directories(dir);
  const auto utilities = utility_table(result.snapshots);
  {
    std::ostringstream out;
    out << "scheme,mean_utility";
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) out << ",snapshot_" << k;
    out << '\n';
    for (const UtilityRow& row : utilities) {
      out << row.scheme << ',' << io::format_double(row.mean_utility);
      for (double u : row.per_snapshot) out << ',' << io::format_double(u);
      out << '\n';
    }
    io::write_text(dir / "utilities.csv", out.str());
  }
  const std::vector<UeFilter> filters = {UeFilter::kAll, UeFilter::kPicoArea,
                                         UeFilter::kNonPicoArea};
  {
    std::ostringstream out;
    out << "scheme,filter,percentile,throughput_mbps,ue_count\n";
    for (const PercentileRow& row : percentile_report(result.snapshots, percentiles, filters)) {
      out << row.scheme << ',' << filter_name(row.filter) << ','
          << io::format_double(row.percentile) << ','
          << (row.mbps ? io::format_double(*row.mbps) : std::string()) << ',' << row.count
          << '\n';
    }
    io::write_text(dir / "percentiles.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "scheme,filter,throughput_mbps,cdf\n";
    for (std::size_t s = 0; s < result.snapshots.front().schemes.size(); ++s) {
      for (UeFilter filter : filters) {
        std::vector<double> sample = pooled_mbps(result.snapshots, s, filter);
        std::sort(sample.begin(), sample.end());
        for (std::size_t i = 0; i < sample.size(); ++i) {
          out << result.snapshots.front().schemes[s].scheme << ',' << filter_name(filter) << ','
              << io::format_double(sample[i]) << ','
              << io::format_double(static_cast<double>(i + 1) /
                                   static_cast<double>(sample.size()))
              << '\n';
        }
      }
    }
    io::write_text(dir / "cdf.csv", out.str());
  }
  io::Json summary = metadata;
  io::Json util = io::Json::object();
  for (const UtilityRow& row : utilities) {
    util[row.scheme] = std::isfinite(row.mean_utility) ? io::Json(row.mean_utility)
                                                       : io::Json(nullptr);
  }
  summary["mean_utility"] = util;
  io::Json snaps = io::Json::array();
  for (const SnapshotResult& s : result.snapshots) {
    io::Json j;
    j["ue_seed"] = s.ue_seed;
    j["solver_seed"] = s.solver_seed;
    j["ues"] = s.pico_area.size();
    if (s.proposed) {
      j["upper_bound"] = s.proposed->upper_bound;
      j["optimality_gap"] = s.proposed->gap;
      j["pico_bias_db"] = s.proposed->bias.pico_bias_db;
      j["abs_pico"] = s.proposed->allocation.abs_pico;
      j["nonabs_macro"] = s.proposed->allocation.nonabs_macro;
    }
    snaps.push_back(std::move(j));
  }
  summary["snapshots"] = std::move(snaps);
  if (result.averaged) {
    const AveragedParameters& avg = *result.averaged;
    summary["averaged"] = {{"abs_pico", avg.abs_pico},
                           {"nonabs_macro", avg.nonabs_macro},
                           {"pico_bias_db", avg.pico_bias_db},
                           {"repairs", avg.repairs}};
    std::ostringstream out;
    out << "cell,index,abs_or_nonabs,bias_db\n";
    for (std::size_t p = 0; p < avg.abs_pico.size(); ++p) {
      out << "pico," << p << ',' << avg.abs_pico[p] << ','
          << io::format_double(avg.pico_bias_db[p]) << '\n';
    }
    for (std::size_t m = 0; m < avg.nonabs_macro.size(); ++m) {
      out << "macro," << m << ',' << avg.nonabs_macro[m] << ",\n";
    }
    io::write_text(dir / "parameters.csv", out.str());
  }
  io::write_json(dir / "summary.json", summary);
}

void write_sweep(const std::filesystem::path& dir, SweepAxis axis,
                 const std::vector<SweepRow>& rows, const io::Json& metadata) {
  std::filesystem::create_directories(dir);
  std::ostringstream out;
  out << axis_name(axis);
  for (const char* filter : {"pico_area", "all"}) {
    for (double q : kSweepPercentiles) out << ",gain_" << filter << "_p" << io::format_double(q);
  }
  if (!rows.empty()) {
    for (const UtilityRow& u : rows.front().utilities) out << ",utility_" << u.scheme;
  }
  out << '\n';
  for (const SweepRow& row : rows) {
    out << io::format_double(row.value);
    for (double g : row.pico_area_gain) out << ',' << io::format_double(g);
    for (double g : row.all_gain) out << ',' << io::format_double(g);
    for (const UtilityRow& u : row.utilities) out << ',' << io::format_double(u.mean_utility);
    out << '\n';
  }
  io::write_text(dir / "sweep.csv", out.str());
  io::Json summary = metadata;
  summary["axis"] = axis_name(axis);
  io::Json values = io::Json::array();
  for (const SweepRow& row : rows) values.push_back(row.value);
  summary["values"] = values;
  io::write_json(dir / "summary.json", summary);
}

}  // namespace eicic::evaluate
