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

#include <cmath>
#include <limits>

#include "doctest.h"

#include "eicic/baselines.hpp"
#include "eicic/oracle.hpp"
#include "eicic/rounding.hpp"
#include "eicic/solver.hpp"
#include "support/fixtures.hpp"

using namespace eicic;
using namespace eicic::oracle;
using namespace eicic::testing;

namespace {

// Enumerates associations, every N_m and every feasible A_p (not only the
// largest), with PF airtimes inside each cell.
double full_enumeration(const NetworkInstance& inst) {
  std::vector<std::size_t> eligible;
  for (std::size_t u = 0; u < inst.num_ues(); ++u) {
    if (inst.ues[u].has_pico()) eligible.push_back(u);
  }
  const int n_sf = inst.n_sf;
  const std::size_t macros = inst.num_macros(), picos = inst.num_picos();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (1ULL << eligible.size()); ++mask) {
    std::vector<Association> assoc(inst.num_ues(), Association::kMacro);
    for (std::size_t k = 0; k < eligible.size(); ++k) {
      if (mask >> k & 1) assoc[eligible[k]] = Association::kPico;
    }
    std::vector<int> nonabs(macros, 0);
    while (true) {
      std::vector<int> cap(picos, n_sf);
      for (std::size_t p = 0; p < picos; ++p) {
        for (std::size_t m : inst.interferers[p]) cap[p] = std::min(cap[p], n_sf - nonabs[m]);
      }
      std::vector<int> abs(picos, 0);
      while (true) {
        try {
          const Allocation a = baselines::pf_allocation(inst, assoc, abs, nonabs);
          best = std::max(best, rounding::safe_utility(a.throughput, inst));
        } catch (const baselines::ZeroRateCell&) {
        }
        std::size_t p = 0;
        while (p < picos && abs[p] == cap[p]) abs[p++] = 0;
        if (p == picos) break;
        ++abs[p];
      }
      std::size_t m = 0;
      while (m < macros && nonabs[m] == n_sf) nonabs[m++] = 0;
      if (m == macros) break;
      ++nonabs[m];
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("lone macro oracle is the closed-form PF split") {
  const std::vector<double> rates = {150.0, 320.0, 800.0};
  const NetworkInstance inst = lone_macro(rates, 8);
  const OracleResult r = brute_force_opt(inst);
  double expected = 0.0;
  for (double rate : rates) expected += std::log(rate * 8.0 / 3.0);
  CHECK(r.allocation.utility == doctest::Approx(expected).epsilon(1e-12));
  CHECK(check_feasibility(r.allocation, inst).ok());
}

TEST_CASE("one eligible UE moves to the pico with balanced ABS") {
  NetworkInstance inst = make_instance(1, 1, 40);
  inst.interferers = {{0}};
  inst.ues.push_back(macro_ue(0, 0, 600.0));
  inst.ues.push_back(pico_ue(1, 0, 0, 40.0, 2000.0, 100.0));
  const OracleResult r = brute_force_opt(inst);
  CHECK(r.allocation.association[1] == Association::kPico);
  auto f = [](double a) { return std::log(600.0 * (40.0 - a)) + std::log(2000.0 * a + 100.0 * (40.0 - a)); };
  double best_int = -INFINITY, best_cont = -INFINITY;
  for (int a = 0; a < 40; ++a) best_int = std::max(best_int, f(a));
  for (int k = 0; k < 400000; ++k) best_cont = std::max(best_cont, f(k * 1e-4));
  CHECK(r.allocation.utility == doctest::Approx(best_int).epsilon(1e-12));
  CHECK(best_cont - r.allocation.utility <= 1e-3);
  CHECK(r.allocation.abs_pico[0] + r.allocation.nonabs_macro[0] == 40);
}

TEST_CASE("largest ABS per pico loses nothing against full enumeration") {
  TinyOptions small;
  small.max_macros = 2;
  small.max_picos = 1;
  small.max_ues = 5;
  small.n_sf = 6;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    const NetworkInstance inst = random_tiny_instance(rng, small);
    CAPTURE(seed);
    CHECK(brute_force_opt(inst).allocation.utility ==
          doctest::Approx(full_enumeration(inst)).epsilon(1e-12));
  }
}

TEST_CASE("oracle dominates the algorithm and every baseline") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(derive_seed(seed, 77));
    TinyOptions opts;
    opts.max_ues = 6;
    const NetworkInstance inst = random_tiny_instance(rng, opts);
    const double best = brute_force_opt(inst).allocation.utility;
    solver::SolverConfig config;
    config.max_iterations = 20000;
    const auto sol = solver::solve_relaxed(inst, config, seed);
    const Allocation alg = rounding::round_solution(sol.z_avg, inst);
    CAPTURE(seed);
    CHECK(best >= alg.utility - 1e-9);
    CHECK(best >= rounding::safe_utility(baselines::no_pico(inst).throughput, inst) - 1e-9);
    CHECK(best >= rounding::safe_utility(baselines::no_eicic(inst).throughput, inst) - 1e-9);
    CHECK(best >= rounding::safe_utility(
                      baselines::fixed_eicic(2, 7.5, inst).throughput, inst) - 1e-9);
  }
}

TEST_CASE("oversized instances are refused with the count") {
  NetworkInstance inst = make_instance(3, 3, 40);
  inst.interferers = {{0}, {1}, {2}};
  for (std::uint32_t u = 0; u < 24; ++u) {
    inst.ues.push_back(pico_ue(u, u % 3, u % 3, 100.0, 500.0, 100.0));
  }
  const double count = enumeration_size(inst);
  CHECK(count == doctest::Approx(std::pow(2.0, 24) * std::pow(41.0, 3)));
  try {
    brute_force_opt(inst);
    FAIL("expected a size error");
  } catch (const SizeError& e) {
    CHECK(e.count() == doctest::Approx(count));
  }
}

TEST_CASE("optimality gap") {
  NetworkInstance inst = lone_macro({1, 1, 1, 1});
  const std::vector<double> rel = {10.0, 20.0, 30.0, 40.0};
  CHECK(optimality_gap(rel, rel, inst) == 0.0);
  const std::vector<double> half = {5.0, 10.0, 15.0, 20.0};
  CHECK(optimality_gap(half, rel, inst) == doctest::Approx(0.5).epsilon(1e-12));
  const std::vector<double> more = {11.0, 20.0, 30.0, 40.0};
  CHECK(optimality_gap(more, rel, inst) == 0.0);
  const std::vector<double> bad = {0.0, 20.0, 30.0, 40.0};
  CHECK_THROWS_AS(optimality_gap(bad, rel, inst), UtilityDomainError);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a(4), b(4);
    for (std::size_t k = 0; k < 4; ++k) {
      a[k] = rng.uniform(1, 100);
      b[k] = rng.uniform(1, 100);
      inst.ues[k].weight = rng.uniform(0.5, 2.0);
    }
    const double g = optimality_gap(a, b, inst);
    const double s = rng.uniform(0.01, 100);
    std::vector<double> as = a, bs = b;
    for (std::size_t k = 0; k < 4; ++k) {
      as[k] *= s;
      bs[k] *= s;
    }
    CHECK(optimality_gap(as, bs, inst) == doctest::Approx(g).epsilon(1e-9));
    CHECK(g >= 0.0);
    CHECK(g < 1.0);
  }
}

TEST_CASE("tiny verification is reproducible") {
  solver::SolverConfig config;
  config.epsilon = std::log(1.1);
  config.max_iterations = 20000;
  const VerificationReport a = verify_tiny(6, 9, config, {}, 1);
  const VerificationReport b = verify_tiny(6, 9, config, {}, 3);
  REQUIRE(a.trials.size() == 6);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(a.trials[t].algorithm_utility == b.trials[t].algorithm_utility);
    CHECK(a.trials[t].oracle_utility == b.trials[t].oracle_utility);
    CHECK(a.trials[t].oracle_utility >= a.trials[t].algorithm_utility - 1e-9);
  }
  CHECK(a.feasible == 6);
}

}  // TEST_SUITE
