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

#include "eicic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eicic/inner_pf.hpp"
#include "eicic/parallel.hpp"
#include "eicic/rounding.hpp"

namespace eicic::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CellSplit {
  std::vector<double> y_abs;
  std::vector<double> y_nonabs;
  std::vector<double> throughput;
  double utility = kNegInf;
};

CellSplit split_macro(const NetworkInstance& instance,
                      const std::vector<std::size_t>& members, int frames) {
  CellSplit out;
  if (members.empty()) {
    out.utility = 0.0;
    return out;
  }
  std::vector<baselines::PfMember> pf;
  bool any_rate = false;
  for (std::size_t u : members) {
    pf.push_back({instance.ues[u].weight, instance.ues[u].rate_macro, 0.0});
    any_rate = any_rate || instance.ues[u].rate_macro > 0.0;
  }
  if (!any_rate || frames <= 0) return out;
  const auto split = baselines::macro_pf_allocation(pf, frames, "macro");
  out.y_abs = split.y_abs;
  out.y_nonabs = split.y_nonabs;
  out.throughput = split.throughput;
  out.utility = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!(split.throughput[i] > 0.0)) {
      out.utility = kNegInf;
      break;
    }
    out.utility += pf[i].weight * std::log(split.throughput[i]);
  }
  return out;
}

CellSplit split_pico(const NetworkInstance& instance,
                     const std::vector<std::size_t>& members, int abs_frames) {
  CellSplit out;
  if (members.empty()) {
    out.utility = 0.0;
    return out;
  }
  std::vector<baselines::PfMember> pf;
  bool any_rate = false;
  for (std::size_t u : members) {
    const UeRecord& ue = instance.ues[u];
    pf.push_back({ue.weight, ue.rate_pico_abs, ue.rate_pico_nonabs});
    any_rate = any_rate || ue.rate_pico_abs > 0.0 || ue.rate_pico_nonabs > 0.0;
  }
  if (!any_rate) return out;
  const auto split = baselines::pico_pf_allocation(pf, abs_frames, instance.n_sf, "pico");
  out.y_abs = split.y_abs;
  out.y_nonabs = split.y_nonabs;
  out.throughput = split.throughput;
  out.utility = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!(split.throughput[i] > 0.0)) {
      out.utility = kNegInf;
      break;
    }
    out.utility += pf[i].weight * std::log(split.throughput[i]);
  }
  return out;
}

struct Candidate {
  double utility = kNegInf;
  std::vector<int> nonabs_macro;
};

std::vector<std::vector<std::size_t>> members_of(const std::vector<Association>& association,
                                                 const NetworkInstance& instance,
                                                 Association side) {
  const std::size_t cells =
      side == Association::kMacro ? instance.num_macros() : instance.num_picos();
  std::vector<std::vector<std::size_t>> out(cells);
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    if (association[u] != side) continue;
    const UeRecord& ue = instance.ues[u];
    out[side == Association::kMacro ? ue.best_macro : *ue.best_pico].push_back(u);
  }
  return out;
}

int abs_cap(const NetworkInstance& instance, std::size_t p, const std::vector<int>& nonabs) {
  int cap = instance.n_sf;
  for (std::size_t m : instance.interferers[p]) cap = std::min(cap, instance.n_sf - nonabs[m]);
  return cap;
}

}  // namespace

double enumeration_size(const NetworkInstance& instance) {
  double eligible = 0.0;
  for (const UeRecord& ue : instance.ues) eligible += ue.has_pico() ? 1.0 : 0.0;
  return std::pow(2.0, eligible) *
         std::pow(static_cast<double>(instance.n_sf + 1),
                  static_cast<double>(instance.num_macros()));
}

OracleResult brute_force_opt(const NetworkInstance& instance, const OracleOptions& options) {
  validate(instance);
  const double count = enumeration_size(instance);
  if (count > options.max_enumeration) {
    throw SizeError(count, "oracle enumeration of " + std::to_string(count) +
                               " configurations exceeds the limit of " +
                               std::to_string(options.max_enumeration));
  }
  std::vector<std::size_t> eligible;
  for (std::size_t u = 0; u < instance.num_ues(); ++u) {
    if (instance.ues[u].has_pico()) eligible.push_back(u);
  }
  const std::size_t vectors = std::size_t{1} << eligible.size();
  const std::size_t macros = instance.num_macros();
  const std::size_t picos = instance.num_picos();
  const int n_sf = instance.n_sf;

  auto association_of = [&](std::size_t bits) {
    std::vector<Association> association(instance.num_ues(), Association::kMacro);
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (bits >> i & 1U) association[eligible[i]] = Association::kPico;
    }
    return association;
  };

  std::vector<Candidate> best(vectors);
  parallel_for(vectors, options.jobs, [&](std::size_t bits) {
    const auto association = association_of(bits);
    const auto macro_members = members_of(association, instance, Association::kMacro);
    const auto pico_members = members_of(association, instance, Association::kPico);
    // Cell utilities depend only on the cell's own budget.
    std::vector<std::vector<double>> macro_util(macros, std::vector<double>(n_sf + 1));
    std::vector<std::vector<double>> pico_util(picos, std::vector<double>(n_sf + 1));
    for (std::size_t m = 0; m < macros; ++m) {
      for (int n = 0; n <= n_sf; ++n) {
        macro_util[m][n] = split_macro(instance, macro_members[m], n).utility;
      }
    }
    for (std::size_t p = 0; p < picos; ++p) {
      for (int a = 0; a <= n_sf; ++a) {
        pico_util[p][a] = split_pico(instance, pico_members[p], a).utility;
      }
    }
    Candidate& out = best[bits];
    std::vector<int> nonabs(macros, 0);
    for (;;) {
      double total = 0.0;
      for (std::size_t m = 0; m < macros && total != kNegInf; ++m) {
        total += macro_util[m][nonabs[m]];
      }
      for (std::size_t p = 0; p < picos && total != kNegInf; ++p) {
        total += pico_util[p][abs_cap(instance, p, nonabs)];
      }
      if (total > out.utility) {
        out.utility = total;
        out.nonabs_macro = nonabs;
      }
      std::size_t digit = 0;
      while (digit < macros && nonabs[digit] == n_sf) nonabs[digit++] = 0;
      if (digit == macros) break;
      ++nonabs[digit];
    }
  });

  std::size_t winner = vectors;
  for (std::size_t bits = 0; bits < vectors; ++bits) {
    if (best[bits].utility == kNegInf) continue;
    if (winner == vectors || best[bits].utility > best[winner].utility) winner = bits;
  }
  if (winner == vectors) {
    throw std::domain_error("oracle found no configuration serving every UE");
  }

  OracleResult result;
  result.enumerated = count;
  Allocation& a = result.allocation;
  const std::size_t n = instance.num_ues();
  a.association = association_of(winner);
  a.nonabs_macro = best[winner].nonabs_macro;
  a.abs_pico.resize(picos);
  for (std::size_t p = 0; p < picos; ++p) a.abs_pico[p] = abs_cap(instance, p, a.nonabs_macro);
  a.x.assign(n, 0.0);
  a.y_abs.assign(n, 0.0);
  a.y_nonabs.assign(n, 0.0);
  a.throughput.assign(n, 0.0);
  const auto macro_members = members_of(a.association, instance, Association::kMacro);
  const auto pico_members = members_of(a.association, instance, Association::kPico);
  for (std::size_t m = 0; m < macros; ++m) {
    const CellSplit split = split_macro(instance, macro_members[m], a.nonabs_macro[m]);
    for (std::size_t i = 0; i < macro_members[m].size(); ++i) {
      a.x[macro_members[m][i]] = split.y_abs[i];
      a.throughput[macro_members[m][i]] = split.throughput[i];
    }
  }
  for (std::size_t p = 0; p < picos; ++p) {
    const CellSplit split = split_pico(instance, pico_members[p], a.abs_pico[p]);
    for (std::size_t i = 0; i < pico_members[p].size(); ++i) {
      const std::size_t u = pico_members[p][i];
      a.y_abs[u] = split.y_abs[i];
      a.y_nonabs[u] = split.y_nonabs[i];
      a.throughput[u] = split.throughput[i];
    }
  }
  a.utility = best[winner].utility;
  return result;
}

double optimality_gap(std::span<const double> alg_throughput,
                      std::span<const double> rel_throughput,
                      const NetworkInstance& instance) {
  const double alg = utility(alg_throughput, instance);
  const double rel = utility(rel_throughput, instance);
  return optimality_gap_from_utility(alg, rel, total_weight(instance));
}

double optimality_gap_from_utility(double alg_utility, double rel_utility,
                                   double total_weight) {
  if (alg_utility >= rel_utility) return 0.0;
  return 1.0 - std::exp((alg_utility - rel_utility) / total_weight);
}

NetworkInstance random_tiny_instance(Rng& rng, const TinyOptions& options) {
  if (options.max_macros < 1 || options.max_picos < 1 || options.max_ues < 2) {
    throw std::invalid_argument("tiny instances need a macro, a pico and two UEs");
  }
  const std::size_t macros = 1 + rng.index(options.max_macros);
  const std::size_t picos = 1 + rng.index(options.max_picos);
  const std::size_t ues = 2 + rng.index(options.max_ues - 1);
  NetworkInstance instance = make_instance(macros, picos, options.n_sf);
  for (std::size_t p = 0; p < picos; ++p) {
    for (std::size_t m = 0; m < macros; ++m) {
      if (rng.uniform() < 0.7) instance.interferers[p].push_back(m);
    }
  }
  for (std::size_t u = 0; u < ues; ++u) {
    UeRecord ue;
    ue.id = static_cast<std::uint32_t>(u);
    ue.best_macro = rng.index(macros);
    ue.rate_macro = rng.uniform(100.0, 1000.0);
    ue.rsrp_macro = rng.uniform(-100.0, -70.0);
    if (rng.uniform() < 0.7) {
      ue.best_pico = rng.index(picos);
      ue.rate_pico_abs = rng.uniform(300.0, 3000.0);
      ue.rate_pico_nonabs = ue.rate_pico_abs * rng.uniform(0.05, 1.0);
      ue.rsrp_pico = ue.rsrp_macro - rng.uniform(0.0, 15.0);
    }
    instance.ues.push_back(ue);
  }
  return instance;
}

VerificationReport verify_tiny(std::size_t trials, std::uint64_t seed,
                               const solver::SolverConfig& config,
                               const TinyOptions& options, int jobs) {
  VerificationReport report;
  report.trials.resize(trials);
  const double factor = 2.0 * std::exp(config.epsilon);
  solver::SolverConfig inner = config;
  inner.jobs = 1;
  parallel_for(trials, jobs, [&](std::size_t t) {
    TrialRecord& rec = report.trials[t];
    rec.seed = derive_seed(seed, t);
    Rng rng(rec.seed);
    const NetworkInstance instance = random_tiny_instance(rng, options);
    const auto relaxed = solver::solve_relaxed(instance, inner, rec.seed);
    const Allocation alloc = rounding::round_solution(relaxed.z_avg, instance);
    const OracleResult opt = brute_force_opt(instance);
    const double w = total_weight(instance);
    rec.ues = instance.num_ues();
    for (const auto& c : relaxed.components) {
      rec.iterations = std::max(rec.iterations, c.rule.iterations);
    }
    rec.algorithm_utility = alloc.utility;
    rec.oracle_utility = opt.allocation.utility;
    rec.gap = optimality_gap_from_utility(alloc.utility, opt.allocation.utility, w);
    rec.feasible = check_feasibility(alloc, instance).ok();
    rec.approximation_holds = alloc.utility + w * std::log(factor) >= opt.allocation.utility;
  });
  std::vector<double> efficiency;
  for (const TrialRecord& rec : report.trials) {
    efficiency.push_back(1.0 - rec.gap);
    report.max_gap = std::max(report.max_gap, rec.gap);
    if (rec.approximation_holds) ++report.approximation_passes;
    if (rec.feasible) ++report.feasible;
  }
  if (!efficiency.empty()) {
    std::sort(efficiency.begin(), efficiency.end());
    const std::size_t n = efficiency.size();
    report.median_efficiency = n % 2 == 1
                                   ? efficiency[n / 2]
                                   : 0.5 * (efficiency[n / 2 - 1] + efficiency[n / 2]);
    report.min_efficiency = efficiency.front();
  }
  return report;
}

}  // namespace eicic::oracle
