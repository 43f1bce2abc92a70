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

// Domain model for joint ABS / UE-association optimization in a macro-pico
// HetNet. Throughputs are in bits per ABS-period (rate in bits/subframe times
// airtime in subframes per ABS-period); rates are in bits/subframe.

#ifndef EICIC_MODEL_HPP
#define EICIC_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eicic {

// Absolute tolerance applied to real-valued airtime sums.
inline constexpr double kFeasibilityTolerance = 1e-9;

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a logarithm is taken of a nonpositive throughput.
class UtilityDomainError : public std::domain_error {
 public:
  UtilityDomainError(std::size_t ue, const std::string& what)
      : std::domain_error(what), ue_(ue) {}
  std::size_t ue() const noexcept { return ue_; }

 private:
  std::size_t ue_;
};

enum class CellKind { kMacro, kPico };

struct CellId {
  CellKind kind = CellKind::kMacro;
  std::uint32_t index = 0;

  friend bool operator==(const CellId&, const CellId&) = default;
};

struct UeRecord {
  std::uint32_t id = 0;
  double weight = 1.0;
  // Positions into NetworkInstance::macros / NetworkInstance::picos.
  std::size_t best_macro = 0;
  std::optional<std::size_t> best_pico;
  double rate_macro = 0.0;
  double rate_pico_abs = 0.0;
  double rate_pico_nonabs = 0.0;
  double rsrp_macro = 0.0;  // dBm
  std::optional<double> rsrp_pico;

  bool has_pico() const { return best_pico.has_value(); }
};

// The complete input to the optimization. Cell ids are dense: macros[i].index
// == i and picos[j].index == j.
struct NetworkInstance {
  std::vector<CellId> macros;
  std::vector<CellId> picos;
  // interferers[p] = sorted positions of the macros that must blank during
  // pico p's ABS subframes.
  std::vector<std::vector<std::size_t>> interferers;
  std::vector<UeRecord> ues;
  int n_sf = 40;

  std::size_t num_macros() const { return macros.size(); }
  std::size_t num_picos() const { return picos.size(); }
  std::size_t num_ues() const { return ues.size(); }
};

// Builds a well-formed instance skeleton with `macros` and `picos` dense ids.
NetworkInstance make_instance(std::size_t macros, std::size_t picos, int n_sf);

// Throws InvalidInstance describing the first broken invariant.
void validate(const NetworkInstance& instance);

// A (pico, macro) pair with macro in I_p.
struct Edge {
  std::size_t pico = 0;
  std::size_t macro = 0;
};

// Derived cell membership and the edge numbering shared by DualState::mu.
// Edges are ordered by pico, then by macro.
class Topology {
 public:
  explicit Topology(const NetworkInstance& instance);

  std::span<const std::size_t> ues_of_macro(std::size_t m) const {
    return ues_of_macro_[m];
  }
  std::span<const std::size_t> ues_of_pico(std::size_t p) const {
    return ues_of_pico_[p];
  }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::size_t> edges_of_macro(std::size_t m) const {
    return edges_of_macro_[m];
  }
  std::span<const std::size_t> edges_of_pico(std::size_t p) const {
    return edges_of_pico_[p];
  }
  std::size_t num_edges() const { return edges_.size(); }

 private:
  std::vector<std::vector<std::size_t>> ues_of_macro_;
  std::vector<std::vector<std::size_t>> ues_of_pico_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> edges_of_macro_;
  std::vector<std::vector<std::size_t>> edges_of_pico_;
};

// z = (x, y^A, y^nA, A, N, R).
struct PrimalState {
  std::vector<double> x;
  std::vector<double> y_abs;
  std::vector<double> y_nonabs;
  std::vector<double> abs_pico;
  std::vector<double> nonabs_macro;
  std::vector<double> throughput;

  static PrimalState zeros(const NetworkInstance& instance);
};

// p = (lambda, mu, beta, alpha). mu is indexed by Topology edge number.
struct DualState {
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> beta_macro;
  std::vector<double> beta_pico;
  std::vector<double> alpha;

  static DualState zeros(const NetworkInstance& instance);
};

// True when z lies in the box/product set used by the greedy primal update.
bool in_subspace(const PrimalState& z, const NetworkInstance& instance,
                 double tolerance = kFeasibilityTolerance);

enum class Association { kMacro, kPico };

struct Allocation {
  std::vector<Association> association;
  std::vector<int> abs_pico;      // A_p*
  std::vector<int> nonabs_macro;  // N_m*
  std::vector<double> x;
  std::vector<double> y_abs;
  std::vector<double> y_nonabs;
  std::vector<double> throughput;  // bits per ABS-period
  double utility = 0.0;
};

// Sum_u w_u ln R_u.
double utility(std::span<const double> throughput,
               const NetworkInstance& instance);
double utility(const Allocation& allocation, const NetworkInstance& instance);

double total_weight(const NetworkInstance& instance);

// Util(R) - p' g_R(z) with the five penalty groups written out.
double lagrangian(const PrimalState& z, const DualState& p,
                  const NetworkInstance& instance);

enum class ViolationKind {
  kShape,
  kNegativeAirtime,
  kExclusivity,
  kAssociation,
  kThroughput,
  kRange,
  kInterference,
  kMacroAirtime,
  kPicoAbsAirtime,
  kPicoTotalAirtime,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

FeasibilityReport check_feasibility(const Allocation& allocation,
                                    const NetworkInstance& instance);

// Problem-size constants that drive the step-size and iteration rule.
struct ConvergenceParams {
  std::size_t n_ues = 0;
  std::size_t n_macros = 0;
  std::size_t n_picos = 0;
  std::size_t n_edges = 0;
  std::size_t i_max = 0;
  std::size_t u_max = 0;
  double r_max = 0.0;
  double r_min = 0.0;
  double weights_norm_sq = 0.0;
  int n_sf = 40;
};

// Rates are divided by `rate_scale` before r_max / r_min are taken. Zero-rate
// links are excluded from r_min.
ConvergenceParams convergence_params(const NetworkInstance& instance,
                                     double rate_scale = 1.0);

// Largest positive link rate in the instance (0 when there is none).
double max_link_rate(const NetworkInstance& instance);

}  // namespace eicic

#endif  // EICIC_MODEL_HPP
