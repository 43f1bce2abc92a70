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

// End-to-end pipeline and reporting: the proposed scheme (relax, round, fit
// biases, build patterns), the comparison schemes, Monte Carlo snapshot
// averaging, throughput percentiles and parameter sweeps.

#ifndef EICIC_EVALUATE_HPP
#define EICIC_EVALUATE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eicic/bias.hpp"
#include "eicic/io.hpp"
#include "eicic/model.hpp"
#include "eicic/scenario.hpp"
#include "eicic/solver.hpp"

namespace eicic::evaluate {

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::uint64_t seed, const std::string& what)
      : std::runtime_error(what), seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

struct PipelineConfig {
  solver::SolverConfig solver;
  bias::BiasGrid grid;  // also the preprocessing bias window
};

struct ProposedResult {
  solver::RelaxedSolution relaxed;
  Allocation allocation;
  bias::BiasAssignment bias;
  bias::AbsPattern pattern;
  double upper_bound = 0.0;  // relaxed_upper_bound(relaxed)
  double gap = 0.0;          // optimality gap against upper_bound
};

// Bias-window preprocessing, relaxed solve, rounding, bias fit and pattern
// construction. Throws PipelineError (carrying `seed`) if the rounded
// allocation fails check_feasibility on the unprocessed instance.
ProposedResult run_proposed(const NetworkInstance& instance, const PipelineConfig& config,
                            std::uint64_t seed);

// "proposed", "local-opt", "fixed-<abs>-<bias>", "no-eicic", "no-pico".
struct Scheme {
  enum class Kind { kProposed, kLocalOpt, kFixed, kNoEicic, kNoPico };
  Kind kind = Kind::kProposed;
  int abs_count = 0;
  double bias_db = 0.0;

  std::string name() const;
  static Scheme parse(const std::string& name);
};

// proposed, local-opt, fixed (5, 5), (10, 7.5), (15, 10), (15, 15), no-eicic,
// no-pico.
std::vector<Scheme> default_schemes();

struct SchemeOutcome {
  std::string scheme;
  Allocation allocation;
};

struct SnapshotResult {
  std::uint64_t ue_seed = 0;
  std::uint64_t solver_seed = 0;
  std::vector<bool> pico_area;  // UE has a candidate pico
  int n_sf = 40;
  std::vector<SchemeOutcome> schemes;  // in the requested order
  std::optional<ProposedResult> proposed;
};

SnapshotResult evaluate_instance(const NetworkInstance& instance,
                                 const std::vector<Scheme>& schemes,
                                 const PipelineConfig& config, std::uint64_t solver_seed);

struct AveragedParameters {
  std::vector<int> abs_pico;
  std::vector<int> nonabs_macro;
  std::vector<double> pico_bias_db;
  std::size_t repairs = 0;
};

struct MonteCarloResult {
  std::vector<SnapshotResult> snapshots;
  // Present when the proposed scheme ran.
  std::optional<AveragedParameters> averaged;
};

// Snapshot k drops UEs with derive_seed(seed, 2k) and solves with
// derive_seed(seed, 2k + 1); cells come from spec.rng_seed and are shared by
// every snapshot. Averaged A_p and N_m are rounded with rnd and repaired;
// averaged biases (in dB) snap to the nearest grid value.
MonteCarloResult monte_carlo(const scenario::ScenarioSpec& spec, std::size_t snapshots,
                             const std::vector<Scheme>& schemes, const PipelineConfig& config,
                             std::uint64_t seed, int jobs);

AveragedParameters average_parameters(const std::vector<SnapshotResult>& snapshots,
                                      const NetworkInstance& topology,
                                      const bias::BiasGrid& grid);

enum class UeFilter { kAll, kPicoArea, kNonPicoArea };
const char* filter_name(UeFilter filter);

// Linear interpolation between order statistics at rank q (n - 1) / 100.
// Throws std::invalid_argument on an empty sample or q outside [0, 100].
double percentile(std::vector<double> values, double q);

// Throughput in bits per ABS-period to Mbps with 1 ms subframes.
double to_mbps(double bits_per_period, int n_sf);

struct PercentileRow {
  std::string scheme;
  UeFilter filter = UeFilter::kAll;
  double percentile = 0.0;
  std::optional<double> mbps;  // absent when no UE passes the filter
  std::size_t count = 0;
};

// UEs pooled over all snapshots.
std::vector<PercentileRow> percentile_report(const std::vector<SnapshotResult>& snapshots,
                                             const std::vector<double>& percentiles,
                                             const std::vector<UeFilter>& filters);

struct UtilityRow {
  std::string scheme;
  double mean_utility = 0.0;  // -inf if some snapshot starved a UE
  std::vector<double> per_snapshot;
};
std::vector<UtilityRow> utility_table(const std::vector<SnapshotResult>& snapshots);

enum class SweepAxis { kPicoPower, kUeDensity };
SweepAxis parse_axis(const std::string& name);
const char* axis_name(SweepAxis axis);
// 36/30/27 dBm pico powers and 450/225/125 UEs per km^2. A density sweep
// drops any fixed ue_count from the base spec.
std::vector<double> default_sweep_values(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  // Relative throughput gain of proposed over no-eicic at the 5th, 10th and
  // 50th percentiles, pico-area and all UEs.
  std::vector<double> pico_area_gain;
  std::vector<double> all_gain;
  std::vector<UtilityRow> utilities;
};

inline const std::vector<double> kSweepPercentiles = {5.0, 10.0, 50.0};

std::vector<SweepRow> sweep(const scenario::ScenarioSpec& base, SweepAxis axis,
                            const std::vector<double>& values, std::size_t snapshots,
                            const std::vector<Scheme>& schemes, const PipelineConfig& config,
                            std::uint64_t seed, int jobs);

// 64-bit FNV-1a of the bytes.
std::uint64_t fnv1a(const std::string& bytes);

io::Json pipeline_to_json(const PipelineConfig& config);

// utilities.csv, percentiles.csv, cdf.csv, parameters.csv (when averaged
// parameters exist) and summary.json with the given metadata.
void write_reports(const std::filesystem::path& dir, const MonteCarloResult& result,
                   const std::vector<double>& percentiles, const io::Json& metadata);

// sweep.csv and summary.json.
void write_sweep(const std::filesystem::path& dir, SweepAxis axis,
                 const std::vector<SweepRow>& rows, const io::Json& metadata);

}  // namespace eicic::evaluate

#endif  // EICIC_EVALUATE_HPP
