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

// Dual subgradient solver for the relaxed ABS problem (integrality and
// association exclusivity dropped). Each iteration maximizes the Lagrangian
// over the box set greedily (per UE, per macro, per pico), then takes a
// projected subgradient step on the prices. The averaged primal iterate is the
// relaxed solution.
//
// Internally every component works in a rescaled rate unit (by default the
// geometric mean over UEs of their best link rate). The optimal airtimes do not
// depend on that unit, but the step balance between UE prices and cell prices
// does. Utilities and prices are converted back before they are returned.

#ifndef EICIC_SOLVER_HPP
#define EICIC_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eicic/model.hpp"
#include "eicic/rng.hpp"

namespace eicic::solver {

inline constexpr std::int64_t kDefaultMaxIterations = 2'000'000;

class SolverError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RateUnit {
  kMaxLink,      // fastest link of the component has rate 1
  kTypicalLink,  // geometric mean of per-UE best link rates is 1
};

struct SolverConfig {
  double epsilon = 0.05;  // tolerated per-UE utility deviation
  std::optional<double> step_size;
  std::optional<std::int64_t> iterations;
  std::int64_t max_iterations = kDefaultMaxIterations;
  bool record_trace = false;
  std::int64_t trace_stride = 0;  // 0: about 1000 trace points
  bool decompose = true;
  // Start from the prices of a max-RSRP association with equal cell shares
  // instead of full-airtime demand and zero cell prices.
  bool warm_start = true;
  RateUnit rate_unit = RateUnit::kTypicalLink;
  int jobs = 1;
};

struct StepRule {
  double gamma = 0.0;
  std::int64_t iterations = 0;
  double unclamped_iterations = 0.0;
  bool clamped = false;
};

double q_squared(const ConvergenceParams& params);
double b_squared(const ConvergenceParams& params);

// gamma = N eps / Q^2 and T = ceil((Q B / (N eps))^2). When T exceeds
// max_iterations it is clamped and gamma becomes B / (Q sqrt(T)), the step
// minimizing B^2/(2 gamma T) + gamma Q^2 / 2 at that T. Throws SolverError when
// r_min is zero while UEs exist.
StepRule derive_step_and_iterations(const ConvergenceParams& params,
                                    double epsilon,
                                    std::int64_t max_iterations = kDefaultMaxIterations);

// Throughput bounds used by the user update: [r_min n_sf 1e-6, r_max n_sf].
struct ThroughputClamp {
  double lo = 0.0;
  double hi = 0.0;
};
ThroughputClamp throughput_clamp(const ConvergenceParams& params);

// R_u = w_u / lambda_u clamped into `clamp`; lambda <= 0 gives clamp.hi.
double primal_update_user(double lambda, double weight, ThroughputClamp clamp);

struct MacroUpdate {
  double nonabs = 0.0;                 // N_m in {0, n_sf}
  std::optional<std::size_t> winner;   // UE position receiving x = n_sf
};

struct PicoUpdate {
  double abs = 0.0;  // A_p in {0, n_sf}
  std::optional<std::size_t> abs_winner;
  std::optional<std::size_t> nonabs_winner;
};

MacroUpdate primal_update_macro(std::size_t m, const DualState& dual,
                                const NetworkInstance& instance,
                                const Topology& topology, Rng& rng);

PicoUpdate primal_update_pico(std::size_t p, const DualState& dual,
                              const NetworkInstance& instance,
                              const Topology& topology, Rng& rng);

// Full greedy maximizer of the Lagrangian over the box set at prices `dual`.
PrimalState greedy_primal(const DualState& dual, const NetworkInstance& instance,
                          ThroughputClamp clamp, Rng& rng);

// [p + gamma g_R(z)]^+ for the five multiplier families.
DualState dual_update(const DualState& dual, const PrimalState& z, double gamma,
                      const NetworkInstance& instance);

// D(p) = max over the box set (with R clamped) of the Lagrangian.
double dual_cost(const DualState& dual, const NetworkInstance& instance,
                 ThroughputClamp clamp);

// An independent sub-problem together with its positions in the parent.
struct Component {
  NetworkInstance instance;
  std::vector<std::size_t> macros;  // parent macro positions
  std::vector<std::size_t> picos;   // parent pico positions
  std::vector<std::size_t> ues;     // parent UE positions
};

// Connected components of the cell graph whose edges are the interference
// pairs and every UE's (best macro, best pico) candidate pair. Ordered by the
// smallest parent macro position, then smallest pico position.
std::vector<Component> decompose_components(const NetworkInstance& instance);

struct TracePoint {
  std::int64_t iteration = 0;
  double dual_cost = 0.0;              // D(p_t), original units
  double averaged_primal_utility = 0.0;  // Util of the running average supply
};

struct ComponentReport {
  StepRule rule;
  double rate_scale = 1.0;
  ConvergenceParams params;  // normalized units
  double min_dual_cost = 0.0;   // min over iterations of D(p_t), traced only
  double averaged_dual_cost = 0.0;  // D(average of p_t)
};

struct RelaxedSolution {
  PrimalState z_avg;
  DualState final_dual;
  DualState averaged_dual;
  std::vector<TracePoint> dual_cost_trace;  // whole-instance sums
  // Throughput delivered by the averaged airtimes and its utility (−inf when
  // some UE received no airtime at all).
  std::vector<double> relaxed_throughput;
  double relaxed_utility = 0.0;
  double min_dual_cost = 0.0;       // traced only
  double averaged_dual_cost = 0.0;
  std::vector<ComponentReport> components;
};

RelaxedSolution solve_relaxed(const NetworkInstance& instance,
                              const SolverConfig& config, std::uint64_t seed);

// Smallest recorded dual cost. Every dual cost bounds the relaxed optimum from
// above, so this is a certified upper bound on the best achievable utility.
double relaxed_upper_bound(const RelaxedSolution& solution);

// B^2 / (2 gamma T) + gamma Q^2 / 2 for the rule a component ran with, in its
// normalized units. Dual costs differ by the same amount in both unit systems.
// Zero for a component that ran no iterations.
double convergence_bound(const ComponentReport& report);

}  // namespace eicic::solver

#endif  // EICIC_SOLVER_HPP
