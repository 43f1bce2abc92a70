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

#include "eicic/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eicic/evaluate.hpp"
#include "eicic/io.hpp"
#include "eicic/oracle.hpp"
#include "eicic/parallel.hpp"
#include "eicic/rng.hpp"

namespace eicic::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  int jobs = default_jobs();
  std::string out_dir = ".";
  std::optional<int> nsf;
  double epsilon = 0.05;
  std::optional<double> gamma;
  std::optional<std::int64_t> iterations;
  std::int64_t max_iterations = solver::kDefaultMaxIterations;
  double bias_min = 0.0;
  double bias_max = 15.0;
  double bias_step = 0.1;
};

struct Options {
  Common common;
  std::string spec;
  std::string instance;
  bool trace = false;
  std::size_t snapshots = 1;
  std::vector<std::string> schemes;
  std::string axis = "pico_power";
  std::string values;
  std::size_t trials = 50;
  oracle::TinyOptions tiny;
};

void add_common(CLI::App* cmd, Common& c, bool solver_flags) {
  cmd->add_option("--seed", c.seed, "Master seed for every random stream")->required();
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", c.out_dir, "Directory for output artifacts");
  cmd->add_option("--nsf", c.nsf, "Subframes per ABS period (default 40)")
      ->check(CLI::Range(1, 10000));
  if (!solver_flags) return;
  cmd->add_option("--epsilon", c.epsilon, "Solver accuracy target")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", c.gamma, "Fixed step size instead of the derived one")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iterations", c.iterations, "Fixed iteration count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", c.max_iterations, "Cap on the derived iteration count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bias-min", c.bias_min, "Smallest pico bias in dB");
  cmd->add_option("--bias-max", c.bias_max, "Largest pico bias in dB");
  cmd->add_option("--bias-grid", c.bias_step, "Bias grid step in dB")
      ->check(CLI::PositiveNumber);
}

evaluate::PipelineConfig pipeline_config(const Common& c) {
  if (c.bias_min > c.bias_max) throw UsageError("--bias-min exceeds --bias-max");
  evaluate::PipelineConfig config;
  config.solver.epsilon = c.epsilon;
  config.solver.step_size = c.gamma;
  config.solver.iterations = c.iterations;
  config.solver.max_iterations = c.max_iterations;
  config.solver.jobs = c.jobs;
  config.grid.min_db = c.bias_min;
  config.grid.max_db = c.bias_max;
  config.grid.step_db = c.bias_step;
  return config;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

scenario::ScenarioSpec load_spec(const Options& o) {
  scenario::ScenarioSpec spec = io::read_spec(o.spec);
  spec.rng_seed = o.common.seed;
  if (o.common.nsf) spec.n_sf = *o.common.nsf;
  scenario::validate_spec(spec);
  return spec;
}

NetworkInstance load_instance(const Options& o) {
  NetworkInstance instance = io::instance_from_json(io::read_json(o.instance));
  if (o.common.nsf) instance.n_sf = *o.common.nsf;
  return instance;
}

std::vector<evaluate::Scheme> load_schemes(const Options& o) {
  if (o.schemes.empty()) return evaluate::default_schemes();
  std::vector<evaluate::Scheme> out;
  for (const std::string& name : o.schemes) {
    try {
      out.push_back(evaluate::Scheme::parse(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

io::Json metadata(const std::string& command, const Options& o,
                  const evaluate::PipelineConfig& config, const io::Json& input) {
  io::Json meta;
  meta["command"] = command;
  meta["seed"] = o.common.seed;
  meta["config"] = evaluate::pipeline_to_json(config);
  meta["input"] = input;
  meta["config_hash"] = hex64(evaluate::fnv1a(meta["config"].dump() + input.dump()));
  meta["fixed_scheme_blanking"] = "interfering macros only";
  return meta;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const scenario::ScenarioSpec spec = load_spec(o);
  const scenario::Snapshot snap = scenario::generate(spec);
  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  io::write_json(dir / "instance.json", io::instance_to_json(snap.instance));
  std::ostringstream geometry;
  io::write_geometry_csv(geometry, snap);
  io::write_text(dir / "geometry.csv", geometry.str());
  out << "generated " << snap.instance.num_macros() << " macros, "
      << snap.instance.num_picos() << " picos, " << snap.instance.num_ues() << " UEs\n";
  return kOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const NetworkInstance instance = load_instance(o);
  evaluate::PipelineConfig config = pipeline_config(o.common);
  config.solver.record_trace = o.trace;
  const evaluate::ProposedResult result = evaluate::run_proposed(instance, config, o.common.seed);
  const fs::path dir = o.common.out_dir;
  fs::create_directories(dir);
  io::write_json(dir / "allocation.json", io::allocation_to_json(result.allocation));
  std::ostringstream csv;
  io::write_allocation_csv(csv, result.allocation);
  io::write_text(dir / "allocation.csv", csv.str());
  io::write_json(dir / "bias.json", io::bias_to_json(result.bias));
  io::write_json(dir / "pattern.json", io::pattern_to_json(result.pattern));
  if (o.trace) {
    std::ostringstream trace;
    io::write_trace_csv(trace, result.relaxed.dual_cost_trace);
    io::write_text(dir / "trace.csv", trace.str());
  }
  io::Json summary = metadata("solve", o, config, io::instance_to_json(instance));
  summary.erase("input");
  summary["utility"] = result.allocation.utility;
  summary["upper_bound"] = result.upper_bound;
  summary["optimality_gap"] = result.gap;
  io::Json components = io::Json::array();
  for (const solver::ComponentReport& c : result.relaxed.components) {
    components.push_back({{"gamma", c.rule.gamma},
                          {"iterations", c.rule.iterations},
                          {"clamped", c.rule.clamped},
                          {"rate_scale", c.rate_scale},
                          {"averaged_dual_cost", c.averaged_dual_cost}});
  }
  summary["components"] = std::move(components);
  io::write_json(dir / "solve.json", summary);
  out << "utility " << io::format_double(result.allocation.utility) << ", upper bound "
      << io::format_double(result.upper_bound) << ", gap "
      << io::format_double(result.gap) << '\n';
  return kOk;
}

const std::vector<double> kReportPercentiles = {5.0, 10.0, 50.0};

void print_utilities(const evaluate::MonteCarloResult& result, std::ostream& out) {
  for (const evaluate::UtilityRow& row : evaluate::utility_table(result.snapshots)) {
    out << std::left << std::setw(14) << row.scheme << ' '
        << io::format_double(row.mean_utility) << '\n';
  }
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  if (o.spec.empty() == o.instance.empty()) {
    throw UsageError("evaluate needs exactly one of --spec and --instance");
  }
  const evaluate::PipelineConfig config = pipeline_config(o.common);
  const std::vector<evaluate::Scheme> schemes = load_schemes(o);
  evaluate::MonteCarloResult result;
  io::Json input;
  if (!o.spec.empty()) {
    const scenario::ScenarioSpec spec = load_spec(o);
    input = {{"spec", io::spec_to_json(spec)}};
    result = evaluate::monte_carlo(spec, o.snapshots, schemes, config, o.common.seed,
                                   o.common.jobs);
  } else {
    const NetworkInstance instance = load_instance(o);
    input = {{"instance_hash", hex64(evaluate::fnv1a(io::instance_to_json(instance).dump()))}};
    result.snapshots.push_back(
        evaluate::evaluate_instance(instance, schemes, config, derive_seed(o.common.seed, 1)));
    if (result.snapshots.front().proposed) {
      result.averaged = evaluate::average_parameters(result.snapshots, instance, config.grid);
    }
  }
  io::Json meta = metadata("evaluate", o, config, input);
  meta["snapshot_count"] = result.snapshots.size();
  io::Json names = io::Json::array();
  for (const evaluate::Scheme& s : schemes) names.push_back(s.name());
  meta["schemes"] = names;
  evaluate::write_reports(o.common.out_dir, result, kReportPercentiles, meta);
  print_utilities(result, out);
  return kOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad --values entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--values is empty");
  return out;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  evaluate::SweepAxis axis;
  try {
    axis = evaluate::parse_axis(o.axis);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::vector<double> values =
      o.values.empty() ? evaluate::default_sweep_values(axis) : parse_values(o.values);
  const evaluate::PipelineConfig config = pipeline_config(o.common);
  const std::vector<evaluate::Scheme> schemes = load_schemes(o);
  const scenario::ScenarioSpec spec = load_spec(o);
  const std::vector<evaluate::SweepRow> rows = evaluate::sweep(
      spec, axis, values, o.snapshots, schemes, config, o.common.seed, o.common.jobs);
  io::Json meta = metadata("sweep", o, config, {{"spec", io::spec_to_json(spec)}});
  meta["snapshot_count"] = o.snapshots;
  evaluate::write_sweep(o.common.out_dir, axis, rows, meta);
  for (const evaluate::SweepRow& row : rows) {
    out << evaluate::axis_name(axis) << ' ' << io::format_double(row.value)
        << ": pico-area p5 gain " << io::format_double(row.pico_area_gain.front())
        << ", all p5 gain " << io::format_double(row.all_gain.front()) << '\n';
  }
  return kOk;
}

int cmd_oracle_check(const Options& o, std::ostream& out) {
  evaluate::PipelineConfig config = pipeline_config(o.common);
  oracle::TinyOptions tiny = o.tiny;
  if (o.common.nsf) tiny.n_sf = *o.common.nsf;
  // Refuse up front when the largest instance the bounds allow is too big.
  const double worst = std::pow(2.0, static_cast<double>(tiny.max_ues)) *
                       std::pow(tiny.n_sf + 1.0, static_cast<double>(tiny.max_macros));
  if (worst > oracle::kMaxEnumeration) {
    throw oracle::SizeError(worst, "instances up to " + std::to_string(tiny.max_ues) + " UEs and " +
                                       std::to_string(tiny.max_macros) +
                                       " macros may need up to " + io::format_double(worst) +
                                       " oracle configurations, above the limit of " +
                                       io::format_double(oracle::kMaxEnumeration));
  }
  const oracle::VerificationReport report =
      oracle::verify_tiny(o.trials, o.common.seed, config.solver, tiny, o.common.jobs);
  const double factor = 2.0 * std::exp(config.solver.epsilon);
  const bool pass = report.feasible == report.trials.size() &&
                    report.approximation_passes == report.trials.size();
  out << "trials " << report.trials.size() << '\n'
      << "feasible " << report.feasible << '/' << report.trials.size() << '\n'
      << "approximation factor " << io::format_double(factor) << " holds "
      << report.approximation_passes << '/' << report.trials.size() << '\n'
      << "efficiency median " << io::format_double(report.median_efficiency) << " min "
      << io::format_double(report.min_efficiency) << '\n'
      << "max gap " << io::format_double(report.max_gap) << '\n'
      << "verdict " << (pass ? "PASS" : "FAIL") << '\n';
  io::Json doc;
  doc["seed"] = o.common.seed;
  doc["epsilon"] = config.solver.epsilon;
  doc["factor"] = factor;
  doc["n_sf"] = tiny.n_sf;
  doc["feasible"] = report.feasible;
  doc["approximation_passes"] = report.approximation_passes;
  doc["median_efficiency"] = report.median_efficiency;
  doc["min_efficiency"] = report.min_efficiency;
  doc["max_gap"] = report.max_gap;
  doc["verdict"] = pass ? "pass" : "fail";
  io::Json trials = io::Json::array();
  for (const oracle::TrialRecord& t : report.trials) {
    trials.push_back({{"seed", t.seed},
                      {"ues", t.ues},
                      {"iterations", t.iterations},
                      {"algorithm_utility", t.algorithm_utility},
                      {"oracle_utility", t.oracle_utility},
                      {"gap", t.gap},
                      {"feasible", t.feasible},
                      {"approximation_holds", t.approximation_holds}});
  }
  doc["trials"] = std::move(trials);
  fs::create_directories(o.common.out_dir);
  io::write_json(fs::path(o.common.out_dir) / "oracle_check.json", doc);
  return pass ? kOk : kCheckFailed;
}

int fail(std::ostream& err, const char* code, const std::string& message, int status) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  err << "error: " << code << ": " << line << '\n';
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Joint ABS and cell-association optimizer for macro/pico networks", "eicic");
  app.require_subcommand(1);
  Options o;

  CLI::App* generate = app.add_subcommand("generate", "Scenario spec to network instance");
  generate->add_option("--spec", o.spec, "Scenario spec (TOML or .json)")->required();
  add_common(generate, o.common, false);

  CLI::App* solve = app.add_subcommand("solve", "Optimize ABS counts, association and biases");
  solve->add_option("--instance", o.instance, "Instance JSON")->required();
  solve->add_flag("--trace", o.trace, "Write the dual cost trace");
  add_common(solve, o.common, true);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare schemes over snapshots");
  evaluate->add_option("--spec", o.spec, "Scenario spec (TOML or .json)");
  evaluate->add_option("--instance", o.instance, "Instance JSON");
  evaluate->add_option("--snapshots", o.snapshots, "UE drops to average")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--scheme", o.schemes, "Scheme to run (repeatable, default all)");
  add_common(evaluate, o.common, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Gain of eICIC across a parameter axis");
  sweep->add_option("--spec", o.spec, "Scenario spec (TOML or .json)")->required();
  sweep->add_option("--axis", o.axis, "pico_power or ue_density");
  sweep->add_option("--values", o.values, "Comma-separated axis values");
  sweep->add_option("--snapshots", o.snapshots, "UE drops per value")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--scheme", o.schemes, "Scheme to run (repeatable, default all)");
  add_common(sweep, o.common, true);

  CLI::App* check = app.add_subcommand("oracle-check", "Brute-force verification on tiny instances");
  check->add_option("--trials", o.trials, "Random instances")->check(CLI::PositiveNumber);
  check->add_option("--max-macros", o.tiny.max_macros)->check(CLI::PositiveNumber);
  check->add_option("--max-picos", o.tiny.max_picos)->check(CLI::PositiveNumber);
  check->add_option("--max-ues", o.tiny.max_ues)->check(CLI::Range(2, 64));
  add_common(check, o.common, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, "usage", e.what(), kUsage);
  }
  // oracle-check defaults to delta = 0.1, an approximation factor of 2.2.
  if (check->parsed() && check->get_option("--epsilon")->count() == 0) {
    o.common.epsilon = std::log(1.1);
  }

  try {
    if (generate->parsed()) return cmd_generate(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    return cmd_oracle_check(o, out);
  } catch (const UsageError& e) {
    return fail(err, "usage", e.what(), kUsage);
  } catch (const oracle::SizeError& e) {
    return fail(err, "size", e.what(), kSize);
  } catch (const evaluate::PipelineError& e) {
    return fail(err, "infeasible",
                std::string(e.what()) + " (seed " + std::to_string(e.seed()) + ")", kInternal);
  } catch (const io::IoError& e) {
    return fail(err, "config", e.what(), kConfig);
  } catch (const scenario::GenerationError& e) {
    return fail(err, "config", e.what(), kConfig);
  } catch (const std::invalid_argument& e) {
    return fail(err, "config", e.what(), kConfig);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), kInternal);
  }
}

}  // namespace eicic::cli
