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

#include "eicic/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eicic {

namespace {

std::string ue_label(const NetworkInstance& instance, std::size_t u) {
  return "UE " + std::to_string(instance.ues[u].id) + " (position " +
         std::to_string(u) + ")";
}

}  // namespace

NetworkInstance make_instance(std::size_t macros, std::size_t picos,
                              int n_sf) {
  NetworkInstance instance;
  instance.n_sf = n_sf;
  for (std::size_t m = 0; m < macros; ++m) {
    instance.macros.push_back({CellKind::kMacro, static_cast<std::uint32_t>(m)});
  }
  for (std::size_t p = 0; p < picos; ++p) {
    instance.picos.push_back({CellKind::kPico, static_cast<std::uint32_t>(p)});
  }
  instance.interferers.assign(picos, {});
  return instance;
}

void validate(const NetworkInstance& instance) {
  if (instance.n_sf < 1) throw InvalidInstance("n_sf must be >= 1");
  for (std::size_t m = 0; m < instance.macros.size(); ++m) {
    const CellId& id = instance.macros[m];
    if (id.kind != CellKind::kMacro || id.index != m) {
      throw InvalidInstance("macro ids must be dense; bad entry at position " +
                            std::to_string(m));
    }
  }
  for (std::size_t p = 0; p < instance.picos.size(); ++p) {
    const CellId& id = instance.picos[p];
    if (id.kind != CellKind::kPico || id.index != p) {
      throw InvalidInstance("pico ids must be dense; bad entry at position " +
                            std::to_string(p));
    }
  }
  if (instance.interferers.size() != instance.picos.size()) {
    throw InvalidInstance("interferers must hold one macro set per pico");
  }
  for (std::size_t p = 0; p < instance.interferers.size(); ++p) {
    const auto& set = instance.interferers[p];
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (set[k] >= instance.macros.size()) {
        throw InvalidInstance("pico " + std::to_string(p) +
                              " lists unknown interfering macro " +
                              std::to_string(set[k]));
      }
      if (k > 0 && set[k] <= set[k - 1]) {
        throw InvalidInstance("interferers of pico " + std::to_string(p) +
                              " must be strictly increasing");
      }
    }
  }
  for (std::size_t u = 0; u < instance.ues.size(); ++u) {
    const UeRecord& ue = instance.ues[u];
    const std::string label = ue_label(instance, u);
    if (!(ue.weight > 0.0) || !std::isfinite(ue.weight)) {
      throw InvalidInstance(label + ": weight must be positive");
    }
    if (ue.best_macro >= instance.macros.size()) {
      throw InvalidInstance(label + ": best_macro out of range");
    }
    if (!(ue.rate_macro >= 0.0) || !std::isfinite(ue.rate_macro)) {
      throw InvalidInstance(label + ": rate_macro must be >= 0");
    }
    if (!(ue.rate_pico_nonabs >= 0.0) ||
        !(ue.rate_pico_abs >= ue.rate_pico_nonabs) ||
        !std::isfinite(ue.rate_pico_abs)) {
      throw InvalidInstance(label +
                            ": need rate_pico_abs >= rate_pico_nonabs >= 0");
    }
    if (ue.best_pico) {
      if (*ue.best_pico >= instance.picos.size()) {
        throw InvalidInstance(label + ": best_pico out of range");
      }
      if (!ue.rsrp_pico) {
        throw InvalidInstance(label + ": rsrp_pico required with best_pico");
      }
    } else {
      if (ue.rate_pico_abs != 0.0 || ue.rate_pico_nonabs != 0.0) {
        throw InvalidInstance(label + ": pico rates must be 0 without a pico");
      }
      if (ue.rsrp_pico) {
        throw InvalidInstance(label + ": rsrp_pico present without best_pico");
      }
    }
  }
}

Topology::Topology(const NetworkInstance& instance)
    : ues_of_macro_(instance.num_macros()),
      ues_of_pico_(instance.num_picos()),
      edges_of_macro_(instance.num_macros()),
      edges_of_pico_(instance.num_picos()) {
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    ues_of_macro_[ue.best_macro].push_back(u);
    if (ue.best_pico) ues_of_pico_[*ue.best_pico].push_back(u);
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    for (std::size_t m : instance.interferers[p]) {
      edges_of_pico_[p].push_back(edges_.size());
      edges_of_macro_[m].push_back(edges_.size());
      edges_.push_back({p, m});
    }
  }
}

PrimalState PrimalState::zeros(const NetworkInstance& instance) {
  PrimalState z;
  z.x.assign(instance.num_ues(), 0.0);
  z.y_abs.assign(instance.num_ues(), 0.0);
  z.y_nonabs.assign(instance.num_ues(), 0.0);
  z.abs_pico.assign(instance.num_picos(), 0.0);
  z.nonabs_macro.assign(instance.num_macros(), 0.0);
  z.throughput.assign(instance.num_ues(), 0.0);
  return z;
}

DualState DualState::zeros(const NetworkInstance& instance) {
  std::size_t edges = 0;
  for (const auto& set : instance.interferers) edges += set.size();
  DualState p;
  p.lambda.assign(instance.num_ues(), 0.0);
  p.mu.assign(edges, 0.0);
  p.beta_macro.assign(instance.num_macros(), 0.0);
  p.beta_pico.assign(instance.num_picos(), 0.0);
  p.alpha.assign(instance.num_picos(), 0.0);
  return p;
}

bool in_subspace(const PrimalState& z, const NetworkInstance& instance,
                 double tolerance) {
  const double n_sf = instance.n_sf;
  const Topology topology(instance);
  for (double a : z.abs_pico) {
    if (a < -tolerance || a > n_sf + tolerance) return false;
  }
  for (double n : z.nonabs_macro) {
    if (n < -tolerance || n > n_sf + tolerance) return false;
  }
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    if (z.x[u] < -tolerance || z.y_abs[u] < -tolerance ||
        z.y_nonabs[u] < -tolerance) {
      return false;
    }
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    double sum = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) sum += z.x[u];
    if (sum > n_sf + tolerance) return false;
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    double sum_abs = 0.0;
    double sum_nonabs = 0.0;
    for (std::size_t u : topology.ues_of_pico(p)) {
      sum_abs += z.y_abs[u];
      sum_nonabs += z.y_nonabs[u];
    }
    if (sum_abs > n_sf + tolerance || sum_nonabs > n_sf + tolerance) {
      return false;
    }
  }
  return true;
}

double utility(std::span<const double> throughput,
               const NetworkInstance& instance) {
  double total = 0.0;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const double r = throughput[u];
    if (!(r > 0.0)) {
      throw UtilityDomainError(u, ue_label(instance, u) +
                                      " has nonpositive throughput " +
                                      std::to_string(r));
    }
    total += instance.ues[u].weight * std::log(r);
  }
  return total;
}

double utility(const Allocation& allocation, const NetworkInstance& instance) {
  return utility(allocation.throughput, instance);
}

double total_weight(const NetworkInstance& instance) {
  double total = 0.0;
  for (const UeRecord& ue : instance.ues) total += ue.weight;
  return total;
}

double lagrangian(const PrimalState& z, const DualState& p,
                  const NetworkInstance& instance) {
  const Topology topology(instance);
  const double n_sf = instance.n_sf;
  double value = utility(z.throughput, instance);

  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    const double supply = ue.rate_macro * z.x[u] +
                          ue.rate_pico_abs * z.y_abs[u] +
                          ue.rate_pico_nonabs * z.y_nonabs[u];
    value -= p.lambda[u] * (z.throughput[u] - supply);
  }
  for (std::size_t e = 0; e < topology.num_edges(); ++e) {
    const Edge& edge = topology.edges()[e];
    value -= p.mu[e] *
             (z.abs_pico[edge.pico] + z.nonabs_macro[edge.macro] - n_sf);
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    double airtime = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) airtime += z.x[u];
    value -= p.beta_macro[m] * (airtime - z.nonabs_macro[m]);
  }
  for (std::size_t q = 0; q < instance.num_picos(); ++q) {
    double abs_airtime = 0.0;
    double total_airtime = 0.0;
    for (std::size_t u : topology.ues_of_pico(q)) {
      abs_airtime += z.y_abs[u];
      total_airtime += z.y_abs[u] + z.y_nonabs[u];
    }
    value -= p.beta_pico[q] * (abs_airtime - z.abs_pico[q]);
    value -= p.alpha[q] * (total_airtime - n_sf);
  }
  return value;
}

std::string FeasibilityReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) out << v.detail << '\n';
  return out.str();
}

FeasibilityReport check_feasibility(const Allocation& allocation,
                                    const NetworkInstance& instance) {
  FeasibilityReport report;
  auto add = [&report](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };
  const std::size_t n = instance.num_ues();
  if (allocation.association.size() != n || allocation.x.size() != n ||
      allocation.y_abs.size() != n || allocation.y_nonabs.size() != n ||
      allocation.throughput.size() != n ||
      allocation.abs_pico.size() != instance.num_picos() ||
      allocation.nonabs_macro.size() != instance.num_macros()) {
    add(ViolationKind::kShape, "allocation vectors do not match the instance");
    return report;
  }
  const int n_sf = instance.n_sf;
  const double tol = kFeasibilityTolerance;
  const Topology topology(instance);

  for (std::size_t u = 0; u < n; ++u) {
    const UeRecord& ue = instance.ues[u];
    const std::string label = ue_label(instance, u);
    const double x = allocation.x[u];
    const double ya = allocation.y_abs[u];
    const double yn = allocation.y_nonabs[u];
    if (x < -tol || ya < -tol || yn < -tol) {
      add(ViolationKind::kNegativeAirtime, label + ": negative airtime");
    }
    if (x * (ya + yn) != 0.0) {
      add(ViolationKind::kExclusivity,
          label + ": served by both macro and pico (exclusivity)");
    }
    if (allocation.association[u] == Association::kMacro) {
      if (ya != 0.0 || yn != 0.0) {
        add(ViolationKind::kAssociation,
            label + ": macro-associated but holds pico airtime");
      }
    } else {
      if (!ue.has_pico()) {
        add(ViolationKind::kAssociation,
            label + ": pico-associated without a candidate pico");
      }
      if (x != 0.0) {
        add(ViolationKind::kAssociation,
            label + ": pico-associated but holds macro airtime");
      }
    }
    const double supply = ue.rate_macro * x + ue.rate_pico_abs * ya +
                          ue.rate_pico_nonabs * yn;
    if (allocation.throughput[u] > supply + tol * std::max(1.0, supply)) {
      add(ViolationKind::kThroughput,
          label + ": throughput exceeds rate x airtime");
    }
  }

  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    const int a = allocation.abs_pico[p];
    if (a < 0 || a > n_sf) {
      add(ViolationKind::kRange, "pico " + std::to_string(p) + ": A_p=" +
                                     std::to_string(a) + " outside [0, n_sf]");
    }
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const int nm = allocation.nonabs_macro[m];
    if (nm < 0 || nm > n_sf) {
      add(ViolationKind::kRange, "macro " + std::to_string(m) + ": N_m=" +
                                     std::to_string(nm) +
                                     " outside [0, n_sf]");
    }
  }
  for (const Edge& edge : topology.edges()) {
    const int sum =
        allocation.abs_pico[edge.pico] + allocation.nonabs_macro[edge.macro];
    if (sum > n_sf) {
      add(ViolationKind::kInterference,
          "edge (pico " + std::to_string(edge.pico) + ", macro " +
              std::to_string(edge.macro) + "): A_p + N_m = " +
              std::to_string(sum) + " > n_sf");
    }
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    double airtime = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) airtime += allocation.x[u];
    if (airtime > allocation.nonabs_macro[m] + tol) {
      add(ViolationKind::kMacroAirtime,
          "macro " + std::to_string(m) + ": airtime " +
              std::to_string(airtime) + " exceeds N_m");
    }
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    double abs_airtime = 0.0;
    double total_airtime = 0.0;
    for (std::size_t u : topology.ues_of_pico(p)) {
      abs_airtime += allocation.y_abs[u];
      total_airtime += allocation.y_abs[u] + allocation.y_nonabs[u];
    }
    if (abs_airtime > allocation.abs_pico[p] + tol) {
      add(ViolationKind::kPicoAbsAirtime,
          "pico " + std::to_string(p) + ": ABS airtime exceeds A_p");
    }
    if (total_airtime > n_sf + tol) {
      add(ViolationKind::kPicoTotalAirtime,
          "pico " + std::to_string(p) + ": total airtime exceeds n_sf");
    }
  }
  return report;
}

double max_link_rate(const NetworkInstance& instance) {
  double r = 0.0;
  for (const UeRecord& ue : instance.ues) {
    r = std::max({r, ue.rate_macro, ue.rate_pico_abs, ue.rate_pico_nonabs});
  }
  return r;
}

ConvergenceParams convergence_params(const NetworkInstance& instance,
                                     double rate_scale) {
  const Topology topology(instance);
  ConvergenceParams params;
  params.n_ues = instance.num_ues();
  params.n_macros = instance.num_macros();
  params.n_picos = instance.num_picos();
  params.n_edges = topology.num_edges();
  params.n_sf = instance.n_sf;

  std::size_t interferers_per_pico = 0;
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    interferers_per_pico =
        std::max(interferers_per_pico, topology.edges_of_pico(p).size());
  }
  std::size_t picos_per_macro = 0;
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    picos_per_macro =
        std::max(picos_per_macro, topology.edges_of_macro(m).size());
  }
  params.i_max = std::max(interferers_per_pico, picos_per_macro);

  double weights_norm_sq = 0.0;
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    params.u_max = std::max(params.u_max, topology.ues_of_macro(m).size());
    double w = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) w += instance.ues[u].weight;
    weights_norm_sq += w * w;
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    params.u_max = std::max(params.u_max, topology.ues_of_pico(p).size());
    double w = 0.0;
    for (std::size_t u : topology.ues_of_pico(p)) w += instance.ues[u].weight;
    weights_norm_sq += w * w;
  }
  params.weights_norm_sq = weights_norm_sq;

  double r_max = 0.0;
  double r_min = 0.0;
  for (const UeRecord& ue : instance.ues) {
    for (double r : {ue.rate_macro, ue.rate_pico_abs, ue.rate_pico_nonabs}) {
      if (r <= 0.0) continue;
      r /= rate_scale;
      r_max = std::max(r_max, r);
      r_min = r_min == 0.0 ? r : std::min(r_min, r);
    }
  }
  params.r_max = r_max;
  params.r_min = r_min;
  return params;
}

}  // namespace eicic
