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

#include "eicic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eicic/parallel.hpp"

namespace eicic::solver {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Reservoir pick over the argmax set of value(u) > 0 across `ues`.
template <typename ValueFn>
std::optional<std::size_t> best_positive(std::span<const std::size_t> ues,
                                         ValueFn&& value, Rng& rng) {
  std::optional<std::size_t> best;
  double best_value = 0.0;
  std::size_t ties = 0;
  for (std::size_t u : ues) {
    const double v = value(u);
    if (!(v > 0.0)) continue;
    if (!best || v > best_value) {
      best = u;
      best_value = v;
      ties = 1;
    } else if (v == best_value) {
      ++ties;
      if (rng.index(ties) == 0) best = u;
    }
  }
  return best;
}

double sum_mu(std::span<const std::size_t> edges, const DualState& dual) {
  double s = 0.0;
  for (std::size_t e : edges) s += dual.mu[e];
  return s;
}

NetworkInstance scaled_instance(const NetworkInstance& instance, double scale) {
  NetworkInstance out = instance;
  for (UeRecord& ue : out.ues) {
    ue.rate_macro /= scale;
    ue.rate_pico_abs /= scale;
    ue.rate_pico_nonabs /= scale;
  }
  return out;
}

double max_ue_rate(const UeRecord& ue) {
  return std::max({ue.rate_macro, ue.rate_pico_abs, ue.rate_pico_nonabs});
}

// Geometric mean over UEs of the best link rate.
double typical_link_rate(const NetworkInstance& instance) {
  double log_sum = 0.0;
  std::size_t count = 0;
  for (const UeRecord& ue : instance.ues) {
    const double r = max_ue_rate(ue);
    if (r > 0.0) {
      log_sum += std::log(r);
      ++count;
    }
  }
  return count == 0 ? 1.0 : std::exp(log_sum / static_cast<double>(count));
}

double rate_unit(const NetworkInstance& instance, RateUnit unit) {
  return unit == RateUnit::kTypicalLink ? typical_link_rate(instance) : max_link_rate(instance);
}

struct ComponentResult {
  PrimalState z_avg;  // original units
  DualState final_dual;
  DualState averaged_dual;
  std::vector<TracePoint> trace;
  ComponentReport report;
};

DualState initial_dual(const NetworkInstance& scaled,
                       bool warm_start) {
  DualState dual = DualState::zeros(scaled);
  const double n_sf = scaled.n_sf;
  for (std::size_t u = 0; u < scaled.num_ues(); ++u) {
    const UeRecord& ue = scaled.ues[u];
    const double r = max_ue_rate(ue);
    if (!(r > 0.0)) {
      throw SolverError("UE " + std::to_string(ue.id) +
                        " has no link with a positive rate");
    }
    dual.lambda[u] = ue.weight / (r * n_sf);
  }
  if (!warm_start) return dual;

  // Market prices of the no-ABS network under the RSRP association: each
  // cell sells a subframe at (member weight) / n_sf and every UE pays its
  // cell's price per bit, so R = w / lambda starts at the PF split.
  std::vector<bool> on_pico(scaled.num_ues(), false);
  std::vector<double> macro_weight(scaled.num_macros(), 0.0);
  std::vector<double> pico_weight(scaled.num_picos(), 0.0);
  for (std::size_t u = 0; u < scaled.num_ues(); ++u) {
    const UeRecord& ue = scaled.ues[u];
    const double pico_rate = std::max(ue.rate_pico_nonabs, ue.rate_pico_abs);
    if (ue.best_pico && pico_rate > 0.0) {
      const bool stronger = ue.rsrp_pico ? *ue.rsrp_pico > ue.rsrp_macro
                                         : ue.rate_pico_nonabs > ue.rate_macro;
      on_pico[u] = ue.rate_macro <= 0.0 || stronger;
    }
    if (on_pico[u]) {
      pico_weight[*ue.best_pico] += ue.weight;
    } else {
      macro_weight[ue.best_macro] += ue.weight;
    }
  }
  for (std::size_t m = 0; m < scaled.num_macros(); ++m) dual.beta_macro[m] = macro_weight[m] / n_sf;
  for (std::size_t p = 0; p < scaled.num_picos(); ++p) dual.alpha[p] = pico_weight[p] / n_sf;
  for (std::size_t u = 0; u < scaled.num_ues(); ++u) {
    const UeRecord& ue = scaled.ues[u];
    if (on_pico[u]) {
      const double rate = ue.rate_pico_nonabs > 0.0 ? ue.rate_pico_nonabs : ue.rate_pico_abs;
      dual.lambda[u] = dual.alpha[*ue.best_pico] / rate;
    } else {
      dual.lambda[u] = dual.beta_macro[ue.best_macro] / ue.rate_macro;
    }
  }
  return dual;
}

ComponentResult solve_component(const NetworkInstance& instance,
                                const SolverConfig& config, std::uint64_t seed,
                                std::int64_t trace_stride) {
  ComponentResult result;
  result.z_avg = PrimalState::zeros(instance);
  result.final_dual = DualState::zeros(instance);
  result.averaged_dual = DualState::zeros(instance);
  if (instance.num_ues() == 0) return result;

  const double scale = rate_unit(instance, config.rate_unit);
  const NetworkInstance scaled = scaled_instance(instance, scale);
  const Topology topology(scaled);
  const ConvergenceParams params = convergence_params(scaled);
  StepRule rule = derive_step_and_iterations(params, config.epsilon,
                                             config.max_iterations);
  if (config.step_size) rule.gamma = *config.step_size;
  if (config.iterations) {
    rule.iterations = *config.iterations;
    rule.clamped = false;
  }
  if (!(rule.gamma > 0.0) || rule.iterations < 1) {
    throw SolverError("step size must be positive and iterations >= 1");
  }
  const ThroughputClamp clamp = throughput_clamp(params);
  result.report.rule = rule;
  result.report.rate_scale = scale;
  result.report.params = params;

  const std::size_t n = scaled.num_ues();
  const std::size_t macros = scaled.num_macros();
  const std::size_t picos = scaled.num_picos();
  const std::size_t edges = topology.num_edges();
  const double n_sf = scaled.n_sf;
  const double gamma = rule.gamma;
  const std::int64_t iterations = rule.iterations;
  double log_scale_weight = 0.0;
  for (const UeRecord& ue : scaled.ues) log_scale_weight += ue.weight * std::log(scale);

  Rng rng(seed);
  DualState dual = initial_dual(scaled, config.warm_start);

  // Running sums for the primal and dual averages.
  std::vector<double> sum_x(n, 0.0), sum_ya(n, 0.0), sum_yn(n, 0.0), sum_r(n, 0.0);
  std::vector<double> sum_a(picos, 0.0), sum_n(macros, 0.0);
  DualState sum_dual = DualState::zeros(scaled);

  std::vector<double> throughput(n, 0.0);
  std::vector<MacroUpdate> macro_updates(macros);
  std::vector<PicoUpdate> pico_updates(picos);
  double min_dual = std::numeric_limits<double>::infinity();

  for (std::int64_t t = 0; t < iterations; ++t) {
    // Greedy primal update at prices p_t.
    for (std::size_t u = 0; u < n; ++u) {
      throughput[u] = primal_update_user(dual.lambda[u], scaled.ues[u].weight, clamp);
    }
    for (std::size_t m = 0; m < macros; ++m) {
      macro_updates[m] = primal_update_macro(m, dual, scaled, topology, rng);
    }
    for (std::size_t p = 0; p < picos; ++p) {
      pico_updates[p] = primal_update_pico(p, dual, scaled, topology, rng);
    }

    if (config.record_trace) {
      // L(z_{t+1}, p_t) equals D(p_t) because z_{t+1} is the inner maximizer.
      double d = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        d += scaled.ues[u].weight * std::log(throughput[u]) - dual.lambda[u] * throughput[u];
      }
      for (std::size_t m = 0; m < macros; ++m) {
        const MacroUpdate& mu = macro_updates[m];
        d += mu.nonabs * (dual.beta_macro[m] - sum_mu(topology.edges_of_macro(m), dual));
        if (mu.winner) {
          d += n_sf * (dual.lambda[*mu.winner] * scaled.ues[*mu.winner].rate_macro -
                       dual.beta_macro[m]);
        }
      }
      for (std::size_t p = 0; p < picos; ++p) {
        const PicoUpdate& pu = pico_updates[p];
        d += pu.abs * (dual.beta_pico[p] - sum_mu(topology.edges_of_pico(p), dual));
        if (pu.abs_winner) {
          d += n_sf * (dual.lambda[*pu.abs_winner] * scaled.ues[*pu.abs_winner].rate_pico_abs -
                       dual.beta_pico[p] - dual.alpha[p]);
        }
        if (pu.nonabs_winner) {
          d += n_sf * (dual.lambda[*pu.nonabs_winner] *
                           scaled.ues[*pu.nonabs_winner].rate_pico_nonabs -
                       dual.alpha[p]);
        }
      }
      for (double mu : dual.mu) d += n_sf * mu;
      for (double a : dual.alpha) d += n_sf * a;
      d += log_scale_weight;
      min_dual = std::min(min_dual, d);
      const bool last = t + 1 == iterations;
      if (last || (t + 1) % trace_stride == 0) {
        // Utility of the running average supply after t + 1 iterates.
        double util = 0.0;
        const double count = static_cast<double>(t + 1);
        for (std::size_t u = 0; u < n; ++u) {
          const UeRecord& ue = scaled.ues[u];
          double supply = ue.rate_macro * sum_x[u] + ue.rate_pico_abs * sum_ya[u] +
                          ue.rate_pico_nonabs * sum_yn[u];
          if (macro_updates[ue.best_macro].winner == u) supply += ue.rate_macro * n_sf;
          if (ue.best_pico) {
            const PicoUpdate& pu = pico_updates[*ue.best_pico];
            if (pu.abs_winner == u) supply += ue.rate_pico_abs * n_sf;
            if (pu.nonabs_winner == u) supply += ue.rate_pico_nonabs * n_sf;
          }
          supply = supply / count * scale;
          util = supply > 0.0 ? util + ue.weight * std::log(supply) : kNegInf;
          if (util == kNegInf) break;
        }
        result.trace.push_back({t, d, util});
      }
    }

    // Accumulate z_{t+1} and p_t, then step the prices with g(z_{t+1}).
    for (std::size_t u = 0; u < n; ++u) {
      sum_r[u] += throughput[u];
      sum_dual.lambda[u] += dual.lambda[u];
      dual.lambda[u] += gamma * throughput[u];
    }
    for (std::size_t e = 0; e < edges; ++e) sum_dual.mu[e] += dual.mu[e];
    for (std::size_t m = 0; m < macros; ++m) {
      sum_dual.beta_macro[m] += dual.beta_macro[m];
    }
    for (std::size_t p = 0; p < picos; ++p) {
      sum_dual.beta_pico[p] += dual.beta_pico[p];
      sum_dual.alpha[p] += dual.alpha[p];
    }

    for (std::size_t e = 0; e < edges; ++e) {
      const Edge& edge = topology.edges()[e];
      const double g = pico_updates[edge.pico].abs + macro_updates[edge.macro].nonabs - n_sf;
      dual.mu[e] = std::max(0.0, dual.mu[e] + gamma * g);
    }
    for (std::size_t m = 0; m < macros; ++m) {
      const MacroUpdate& mu = macro_updates[m];
      sum_n[m] += mu.nonabs;
      double airtime = 0.0;
      if (mu.winner) {
        const std::size_t u = *mu.winner;
        sum_x[u] += n_sf;
        airtime = n_sf;
        dual.lambda[u] -= gamma * scaled.ues[u].rate_macro * n_sf;
      }
      dual.beta_macro[m] = std::max(0.0, dual.beta_macro[m] + gamma * (airtime - mu.nonabs));
    }
    for (std::size_t p = 0; p < picos; ++p) {
      const PicoUpdate& pu = pico_updates[p];
      sum_a[p] += pu.abs;
      double abs_airtime = 0.0;
      double total_airtime = 0.0;
      if (pu.abs_winner) {
        const std::size_t u = *pu.abs_winner;
        sum_ya[u] += n_sf;
        abs_airtime += n_sf;
        total_airtime += n_sf;
        dual.lambda[u] -= gamma * scaled.ues[u].rate_pico_abs * n_sf;
      }
      if (pu.nonabs_winner) {
        const std::size_t u = *pu.nonabs_winner;
        sum_yn[u] += n_sf;
        total_airtime += n_sf;
        dual.lambda[u] -= gamma * scaled.ues[u].rate_pico_nonabs * n_sf;
      }
      dual.beta_pico[p] = std::max(0.0, dual.beta_pico[p] + gamma * (abs_airtime - pu.abs));
      dual.alpha[p] = std::max(0.0, dual.alpha[p] + gamma * (total_airtime - n_sf));
    }
    // Only winners can have been pushed below zero.
    for (const MacroUpdate& mu : macro_updates) {
      if (mu.winner) dual.lambda[*mu.winner] = std::max(0.0, dual.lambda[*mu.winner]);
    }
    for (const PicoUpdate& pu : pico_updates) {
      if (pu.abs_winner) dual.lambda[*pu.abs_winner] = std::max(0.0, dual.lambda[*pu.abs_winner]);
      if (pu.nonabs_winner) {
        dual.lambda[*pu.nonabs_winner] = std::max(0.0, dual.lambda[*pu.nonabs_winner]);
      }
    }
  }

  const double count = static_cast<double>(iterations);
  PrimalState& z = result.z_avg;
  for (std::size_t u = 0; u < n; ++u) {
    z.x[u] = sum_x[u] / count;
    z.y_abs[u] = sum_ya[u] / count;
    z.y_nonabs[u] = sum_yn[u] / count;
    z.throughput[u] = sum_r[u] / count * scale;
  }
  for (std::size_t m = 0; m < macros; ++m) z.nonabs_macro[m] = sum_n[m] / count;
  for (std::size_t p = 0; p < picos; ++p) z.abs_pico[p] = sum_a[p] / count;

  // Prices back in original units: lambda carries 1/rate, the rest are per
  // subframe.
  auto to_original = [&](DualState d, double divisor) {
    for (double& l : d.lambda) l = l / divisor / scale;
    for (double& v : d.mu) v /= divisor;
    for (double& v : d.beta_macro) v /= divisor;
    for (double& v : d.beta_pico) v /= divisor;
    for (double& v : d.alpha) v /= divisor;
    return d;
  };
  result.final_dual = to_original(dual, 1.0);
  result.averaged_dual = to_original(sum_dual, count);
  DualState avg_internal = sum_dual;
  for (double& l : avg_internal.lambda) l /= count;
  for (double& v : avg_internal.mu) v /= count;
  for (double& v : avg_internal.beta_macro) v /= count;
  for (double& v : avg_internal.beta_pico) v /= count;
  for (double& v : avg_internal.alpha) v /= count;
  result.report.averaged_dual_cost = dual_cost(avg_internal, scaled, clamp) + log_scale_weight;
  result.report.min_dual_cost = config.record_trace ? min_dual : result.report.averaged_dual_cost;
  return result;
}

}  // namespace

double q_squared(const ConvergenceParams& params) {
  const double n_sf = params.n_sf;
  return n_sf * n_sf *
         (static_cast<double>(params.n_ues) * params.r_max * params.r_max +
          static_cast<double>(params.n_macros) + static_cast<double>(params.n_picos) +
          2.0 * static_cast<double>(params.n_edges));
}

double b_squared(const ConvergenceParams& params) {
  if (!(params.r_min > 0.0)) {
    throw SolverError("r_min must be positive; exclude zero-rate links first");
  }
  const double n_sf = params.n_sf;
  return params.weights_norm_sq / (n_sf * n_sf) *
         (1.0 + 2.0 * static_cast<double>(params.i_max) +
          static_cast<double>(params.u_max) / params.r_min);
}

StepRule derive_step_and_iterations(const ConvergenceParams& params,
                                    double epsilon, std::int64_t max_iterations) {
  if (!(epsilon > 0.0)) throw SolverError("epsilon must be positive");
  if (params.n_ues == 0) throw SolverError("step rule needs at least one UE");
  const double q2 = q_squared(params);
  const double b2 = b_squared(params);
  const double n_eps = static_cast<double>(params.n_ues) * epsilon;
  StepRule rule;
  rule.gamma = n_eps / q2;
  rule.unclamped_iterations = q2 * b2 / (n_eps * n_eps);
  const double t = std::ceil(rule.unclamped_iterations);
  if (!(t <= static_cast<double>(max_iterations))) {
    rule.iterations = max_iterations;
    rule.clamped = true;
    rule.gamma = std::sqrt(b2 / q2 / static_cast<double>(max_iterations));
  } else {
    rule.iterations = std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
  }
  return rule;
}

ThroughputClamp throughput_clamp(const ConvergenceParams& params) {
  return {params.r_min * params.n_sf * 1e-6, params.r_max * params.n_sf};
}

double primal_update_user(double lambda, double weight, ThroughputClamp clamp) {
  if (!(lambda > 0.0)) return clamp.hi;
  return std::clamp(weight / lambda, clamp.lo, clamp.hi);
}

MacroUpdate primal_update_macro(std::size_t m, const DualState& dual,
                                const NetworkInstance& instance,
                                const Topology& topology, Rng& rng) {
  MacroUpdate out;
  const double beta = dual.beta_macro[m];
  out.nonabs = beta - sum_mu(topology.edges_of_macro(m), dual) > 0.0 ? instance.n_sf : 0.0;
  out.winner = best_positive(
      topology.ues_of_macro(m),
      [&](std::size_t u) { return dual.lambda[u] * instance.ues[u].rate_macro - beta; },
      rng);
  return out;
}

PicoUpdate primal_update_pico(std::size_t p, const DualState& dual,
                              const NetworkInstance& instance,
                              const Topology& topology, Rng& rng) {
  PicoUpdate out;
  const double beta = dual.beta_pico[p];
  const double alpha = dual.alpha[p];
  out.abs = beta - sum_mu(topology.edges_of_pico(p), dual) > 0.0 ? instance.n_sf : 0.0;
  const auto members = topology.ues_of_pico(p);
  out.abs_winner = best_positive(
      members,
      [&](std::size_t u) {
        return dual.lambda[u] * instance.ues[u].rate_pico_abs - beta - alpha;
      },
      rng);
  out.nonabs_winner = best_positive(
      members,
      [&](std::size_t u) { return dual.lambda[u] * instance.ues[u].rate_pico_nonabs - alpha; },
      rng);
  return out;
}

PrimalState greedy_primal(const DualState& dual, const NetworkInstance& instance,
                          ThroughputClamp clamp, Rng& rng) {
  const Topology topology(instance);
  PrimalState z = PrimalState::zeros(instance);
  const double n_sf = instance.n_sf;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    z.throughput[u] = primal_update_user(dual.lambda[u], instance.ues[u].weight, clamp);
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const MacroUpdate update = primal_update_macro(m, dual, instance, topology, rng);
    z.nonabs_macro[m] = update.nonabs;
    if (update.winner) z.x[*update.winner] = n_sf;
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    const PicoUpdate update = primal_update_pico(p, dual, instance, topology, rng);
    z.abs_pico[p] = update.abs;
    if (update.abs_winner) z.y_abs[*update.abs_winner] = n_sf;
    if (update.nonabs_winner) z.y_nonabs[*update.nonabs_winner] = n_sf;
  }
  return z;
}

DualState dual_update(const DualState& dual, const PrimalState& z, double gamma,
                      const NetworkInstance& instance) {
  const Topology topology(instance);
  const double n_sf = instance.n_sf;
  DualState next = dual;
  auto step = [gamma](double price, double g) { return std::max(0.0, price + gamma * g); };
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    const double g = z.throughput[u] - ue.rate_macro * z.x[u] -
                     ue.rate_pico_abs * z.y_abs[u] - ue.rate_pico_nonabs * z.y_nonabs[u];
    next.lambda[u] = step(dual.lambda[u], g);
  }
  for (std::size_t e = 0; e < topology.num_edges(); ++e) {
    const Edge& edge = topology.edges()[e];
    next.mu[e] = step(dual.mu[e], z.abs_pico[edge.pico] + z.nonabs_macro[edge.macro] - n_sf);
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    double airtime = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) airtime += z.x[u];
    next.beta_macro[m] = step(dual.beta_macro[m], airtime - z.nonabs_macro[m]);
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    double abs_airtime = 0.0;
    double total_airtime = 0.0;
    for (std::size_t u : topology.ues_of_pico(p)) {
      abs_airtime += z.y_abs[u];
      total_airtime += z.y_abs[u] + z.y_nonabs[u];
    }
    next.beta_pico[p] = step(dual.beta_pico[p], abs_airtime - z.abs_pico[p]);
    next.alpha[p] = step(dual.alpha[p], total_airtime - n_sf);
  }
  return next;
}

double dual_cost(const DualState& dual, const NetworkInstance& instance,
                 ThroughputClamp clamp) {
  const Topology topology(instance);
  const double n_sf = instance.n_sf;
  double d = 0.0;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const double r = primal_update_user(dual.lambda[u], instance.ues[u].weight, clamp);
    d += instance.ues[u].weight * std::log(r) - dual.lambda[u] * r;
  }
  for (std::size_t m = 0; m < instance.num_macros(); ++m) {
    const double beta = dual.beta_macro[m];
    d += std::max(0.0, beta - sum_mu(topology.edges_of_macro(m), dual)) * n_sf;
    double best = 0.0;
    for (std::size_t u : topology.ues_of_macro(m)) {
      best = std::max(best, dual.lambda[u] * instance.ues[u].rate_macro - beta);
    }
    d += best * n_sf;
  }
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    const double beta = dual.beta_pico[p];
    const double alpha = dual.alpha[p];
    d += std::max(0.0, beta - sum_mu(topology.edges_of_pico(p), dual)) * n_sf;
    double best_abs = 0.0;
    double best_nonabs = 0.0;
    for (std::size_t u : topology.ues_of_pico(p)) {
      best_abs = std::max(best_abs, dual.lambda[u] * instance.ues[u].rate_pico_abs - beta - alpha);
      best_nonabs = std::max(best_nonabs, dual.lambda[u] * instance.ues[u].rate_pico_nonabs - alpha);
    }
    d += (best_abs + best_nonabs) * n_sf;
  }
  for (double mu : dual.mu) d += n_sf * mu;
  for (double a : dual.alpha) d += n_sf * a;
  return d;
}

std::vector<Component> decompose_components(const NetworkInstance& instance) {
  const std::size_t macros = instance.num_macros();
  const std::size_t nodes = macros + instance.num_picos();
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t p = 0; p < instance.num_picos(); ++p) {
    for (std::size_t m : instance.interferers[p]) unite(macros + p, m);
  }
  for (const UeRecord& ue : instance.ues) {
    if (ue.best_pico) unite(ue.best_macro, macros + *ue.best_pico);
  }

  // Roots are the smallest node of each component, so ordering by root
  // orders by smallest macro, then smallest pico.
  std::vector<std::size_t> slot(nodes, SIZE_MAX);
  std::vector<Component> components;
  for (std::size_t v = 0; v < nodes; ++v) {
    const std::size_t root = find(v);
    if (slot[root] == SIZE_MAX) {
      slot[root] = components.size();
      components.emplace_back();
    }
    Component& c = components[slot[root]];
    if (v < macros) {
      c.macros.push_back(v);
    } else {
      c.picos.push_back(v - macros);
    }
  }
  std::vector<std::size_t> local_macro(macros), local_pico(instance.num_picos());
  for (Component& c : components) {
    c.instance = make_instance(c.macros.size(), c.picos.size(), instance.n_sf);
    for (std::size_t i = 0; i < c.macros.size(); ++i) local_macro[c.macros[i]] = i;
    for (std::size_t i = 0; i < c.picos.size(); ++i) {
      local_pico[c.picos[i]] = i;
      // Interferers share the component, so their local ids are already set;
      // the parent order is preserved, keeping each list sorted.
      for (std::size_t m : instance.interferers[c.picos[i]]) {
        c.instance.interferers[i].push_back(local_macro[m]);
      }
    }
  }
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    UeRecord ue = instance.ues[u];
    Component& c = components[slot[find(ue.best_macro)]];
    ue.best_macro = local_macro[ue.best_macro];
    if (ue.best_pico) ue.best_pico = local_pico[*ue.best_pico];
    c.instance.ues.push_back(ue);
    c.ues.push_back(u);
  }
  return components;
}

RelaxedSolution solve_relaxed(const NetworkInstance& instance,
                              const SolverConfig& config, std::uint64_t seed) {
  validate(instance);
  std::vector<Component> components;
  if (config.decompose) {
    components = decompose_components(instance);
  } else {
    Component whole;
    whole.instance = instance;
    whole.macros.resize(instance.num_macros());
    std::iota(whole.macros.begin(), whole.macros.end(), std::size_t{0});
    whole.picos.resize(instance.num_picos());
    std::iota(whole.picos.begin(), whole.picos.end(), std::size_t{0});
    whole.ues.resize(instance.num_ues());
    std::iota(whole.ues.begin(), whole.ues.end(), std::size_t{0});
    components.push_back(std::move(whole));
  }

  // A shared trace schedule so component traces can be summed.
  std::int64_t trace_stride = config.trace_stride;
  if (config.record_trace && trace_stride <= 0) {
    std::int64_t longest = 1;
    for (const Component& c : components) {
      if (c.instance.num_ues() == 0) continue;
      if (config.iterations) {
        longest = std::max(longest, *config.iterations);
        continue;
      }
      const double scale = rate_unit(c.instance, config.rate_unit);
      const NetworkInstance scaled = scaled_instance(c.instance, scale);
      longest = std::max(longest, derive_step_and_iterations(convergence_params(scaled),
                                                             config.epsilon,
                                                             config.max_iterations)
                                      .iterations);
    }
    trace_stride = std::max<std::int64_t>(1, longest / 1000);
  }

  std::vector<ComponentResult> results(components.size());
  parallel_for(components.size(), config.jobs, [&](std::size_t i) {
    results[i] = solve_component(components[i].instance, config, derive_seed(seed, i),
                                 std::max<std::int64_t>(1, trace_stride));
  });

  RelaxedSolution out;
  out.z_avg = PrimalState::zeros(instance);
  out.final_dual = DualState::zeros(instance);
  out.averaged_dual = DualState::zeros(instance);
  const Topology topology(instance);
  // Parent edge index for (pico, macro).
  auto parent_edge = [&](std::size_t p, std::size_t m) {
    for (std::size_t e : topology.edges_of_pico(p)) {
      if (topology.edges()[e].macro == m) return e;
    }
    return SIZE_MAX;
  };
  for (std::size_t i = 0; i < components.size(); ++i) {
    const Component& c = components[i];
    const ComponentResult& r = results[i];
    for (std::size_t k = 0; k < c.ues.size(); ++k) {
      const std::size_t u = c.ues[k];
      out.z_avg.x[u] = r.z_avg.x[k];
      out.z_avg.y_abs[u] = r.z_avg.y_abs[k];
      out.z_avg.y_nonabs[u] = r.z_avg.y_nonabs[k];
      out.z_avg.throughput[u] = r.z_avg.throughput[k];
      out.final_dual.lambda[u] = r.final_dual.lambda[k];
      out.averaged_dual.lambda[u] = r.averaged_dual.lambda[k];
    }
    for (std::size_t k = 0; k < c.macros.size(); ++k) {
      const std::size_t m = c.macros[k];
      out.z_avg.nonabs_macro[m] = r.z_avg.nonabs_macro[k];
      out.final_dual.beta_macro[m] = r.final_dual.beta_macro[k];
      out.averaged_dual.beta_macro[m] = r.averaged_dual.beta_macro[k];
    }
    const Topology local(c.instance);
    for (std::size_t k = 0; k < c.picos.size(); ++k) {
      const std::size_t p = c.picos[k];
      out.z_avg.abs_pico[p] = r.z_avg.abs_pico[k];
      out.final_dual.beta_pico[p] = r.final_dual.beta_pico[k];
      out.averaged_dual.beta_pico[p] = r.averaged_dual.beta_pico[k];
      out.final_dual.alpha[p] = r.final_dual.alpha[k];
      out.averaged_dual.alpha[p] = r.averaged_dual.alpha[k];
      for (std::size_t e : local.edges_of_pico(k)) {
        const std::size_t pe = parent_edge(p, c.macros[local.edges()[e].macro]);
        out.final_dual.mu[pe] = r.final_dual.mu[e];
        out.averaged_dual.mu[pe] = r.averaged_dual.mu[e];
      }
    }
    out.min_dual_cost += r.report.min_dual_cost;
    out.averaged_dual_cost += r.report.averaged_dual_cost;
    out.components.push_back(r.report);
  }

  if (config.record_trace) {
    std::vector<std::int64_t> marks;
    for (const ComponentResult& r : results) {
      for (const TracePoint& tp : r.trace) marks.push_back(tp.iteration);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    for (std::int64_t t : marks) {
      TracePoint merged{t, 0.0, 0.0};
      for (const ComponentResult& r : results) {
        if (r.trace.empty()) continue;
        auto it = std::upper_bound(r.trace.begin(), r.trace.end(), t,
                                   [](std::int64_t v, const TracePoint& tp) {
                                     return v < tp.iteration;
                                   });
        const TracePoint& tp = it == r.trace.begin() ? r.trace.front() : *std::prev(it);
        merged.dual_cost += tp.dual_cost;
        merged.averaged_primal_utility += tp.averaged_primal_utility;
      }
      out.dual_cost_trace.push_back(merged);
    }
  }

  out.relaxed_throughput.assign(instance.num_ues(), 0.0);
  out.relaxed_utility = 0.0;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    const UeRecord& ue = instance.ues[u];
    const double r = ue.rate_macro * out.z_avg.x[u] + ue.rate_pico_abs * out.z_avg.y_abs[u] +
                     ue.rate_pico_nonabs * out.z_avg.y_nonabs[u];
    out.relaxed_throughput[u] = r;
    out.relaxed_utility = r > 0.0 && out.relaxed_utility != kNegInf
                              ? out.relaxed_utility + ue.weight * std::log(r)
                              : kNegInf;
  }
  return out;
}

double relaxed_upper_bound(const RelaxedSolution& solution) {
  return std::min(solution.min_dual_cost, solution.averaged_dual_cost);
}

double convergence_bound(const ComponentReport& report) {
  if (report.rule.iterations == 0) return 0.0;  // a cell without UEs runs no steps
  const double gamma = report.rule.gamma;
  const double t = static_cast<double>(report.rule.iterations);
  return b_squared(report.params) / (2.0 * gamma * t) + gamma * q_squared(report.params) / 2.0;
}

}  // namespace eicic::solver
