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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "eicic/baselines.hpp"
#include "eicic/model.hpp"
#include "eicic/oracle.hpp"
#include "eicic/rng.hpp"
#include "support/fixtures.hpp"

using namespace eicic;
using namespace eicic::testing;

namespace {

NetworkInstance one_pair() {
  NetworkInstance inst = make_instance(1, 1, 40);
  inst.interferers[0] = {0};
  inst.ues.push_back(macro_ue(0, 0, 500.0));
  inst.ues.push_back(pico_ue(1, 0, 0, 200.0, 900.0, 300.0));
  return inst;
}

Allocation empty_allocation(const NetworkInstance& inst) {
  Allocation a;
  const std::size_t n = inst.num_ues();
  a.association.assign(n, Association::kMacro);
  a.x.assign(n, 0.0);
  a.y_abs.assign(n, 0.0);
  a.y_nonabs.assign(n, 0.0);
  a.throughput.assign(n, 0.0);
  a.abs_pico.assign(inst.num_picos(), 0);
  a.nonabs_macro.assign(inst.num_macros(), inst.n_sf);
  return a;
}

bool has_kind(const FeasibilityReport& r, ViolationKind kind) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

// Random instance with every rate family present, a random primal point and
// random nonnegative prices.
struct RandomPoint {
  NetworkInstance inst;
  PrimalState z;
  DualState p;
};

RandomPoint random_point(std::uint64_t seed) {
  Rng rng(seed);
  RandomPoint out;
  out.inst = make_instance(2, 2, 40);
  out.inst.interferers = {{0}, {0, 1}};
  for (std::uint32_t u = 0; u < 7; ++u) {
    const std::size_t m = rng.index(2);
    if (rng.uniform() < 0.6) {
      const double ra = rng.uniform(100, 1000);
      out.inst.ues.push_back(pico_ue(u, m, rng.index(2), rng.uniform(50, 500), ra,
                                     ra * rng.uniform(0.1, 1.0), -80, -85,
                                     rng.uniform(0.5, 2.0)));
    } else {
      out.inst.ues.push_back(macro_ue(u, m, rng.uniform(50, 500), rng.uniform(0.5, 2.0)));
    }
  }
  out.z = PrimalState::zeros(out.inst);
  out.p = DualState::zeros(out.inst);
  for (std::size_t u = 0; u < 7; ++u) {
    out.z.x[u] = rng.uniform(0, 10);
    if (out.inst.ues[u].has_pico()) {
      out.z.y_abs[u] = rng.uniform(0, 10);
      out.z.y_nonabs[u] = rng.uniform(0, 10);
    }
    out.z.throughput[u] = rng.uniform(100, 5000);
    out.p.lambda[u] = rng.uniform(0, 0.01);
  }
  for (double& v : out.z.abs_pico) v = rng.uniform(0, 40);
  for (double& v : out.z.nonabs_macro) v = rng.uniform(0, 40);
  for (double& v : out.p.mu) v = rng.uniform(0, 1);
  for (double& v : out.p.beta_macro) v = rng.uniform(0, 1);
  for (double& v : out.p.beta_pico) v = rng.uniform(0, 1);
  for (double& v : out.p.alpha) v = rng.uniform(0, 1);
  return out;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("utility of two unit-weight UEs is the sum of logs") {
  NetworkInstance inst = lone_macro({1.0, 1.0});
  const std::vector<double> r = {2.0, 8.0};
  CHECK(utility(r, inst) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(utility(r, inst) == doctest::Approx(2.77259).epsilon(1e-5));
}

TEST_CASE("utility scales with weight") {
  NetworkInstance inst = lone_macro({1.0});
  inst.ues[0].weight = 3.0;
  const std::vector<double> r = {std::numbers::e};
  CHECK(utility(r, inst) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("utility rejects a starved UE and names it") {
  NetworkInstance inst = lone_macro({1.0, 1.0, 1.0});
  const std::vector<double> r = {5.0, 0.0, 5.0};
  try {
    utility(r, inst);
    FAIL("expected a domain error");
  } catch (const UtilityDomainError& e) {
    CHECK(e.ue() == 1);
  }
}

TEST_CASE("four equal UEs on a lone macro share the frame evenly") {
  const NetworkInstance inst = lone_macro({1000, 1000, 1000, 1000});
  const Allocation a = baselines::no_pico(inst);
  for (double r : a.throughput) CHECK(r == doctest::Approx(10000.0));
  CHECK(a.utility == doctest::Approx(4.0 * std::log(1e4)));
  const oracle::OracleResult best = oracle::brute_force_opt(inst);
  CHECK(best.allocation.utility == doctest::Approx(4.0 * std::log(1e4)));
}

TEST_CASE("utility is monotone and order-free") {
  Rng rng(11);
  NetworkInstance inst = lone_macro(std::vector<double>(6, 1.0));
  std::vector<double> r(6);
  for (double& v : r) v = rng.uniform(1, 100);
  const double base = utility(r, inst);
  for (std::size_t u = 0; u < r.size(); ++u) {
    std::vector<double> more = r;
    more[u] *= 1.01;
    CHECK(utility(more, inst) > base);
  }
  std::vector<double> reversed(r.rbegin(), r.rend());
  CHECK(utility(reversed, inst) == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("lagrangian with zero prices equals utility") {
  RandomPoint pt = random_point(3);
  const DualState zero = DualState::zeros(pt.inst);
  CHECK(lagrangian(pt.z, zero, pt.inst) ==
        doctest::Approx(utility(pt.z.throughput, pt.inst)).epsilon(1e-13));
}

TEST_CASE("lagrangian matches a term-by-term expansion") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomPoint pt = random_point(seed);
    CAPTURE(seed);
    CHECK(lagrangian(pt.z, pt.p, pt.inst) ==
          doctest::Approx(lagrangian_ref(pt.z, pt.p, pt.inst)).epsilon(1e-12));
  }
}

TEST_CASE("lagrangian of a feasible point with slack is at least its utility") {
  const NetworkInstance inst = one_pair();
  PrimalState z = PrimalState::zeros(inst);
  z.nonabs_macro = {25.0};
  z.abs_pico = {10.0};
  z.x = {20.0, 0.0};
  z.y_abs = {0.0, 8.0};
  z.y_nonabs = {0.0, 20.0};
  z.throughput = {500.0 * 20.0, 900.0 * 8.0 + 300.0 * 20.0 - 1.0};
  DualState p = DualState::zeros(inst);
  p.lambda = {0.3, 0.2};
  p.mu = {0.5};
  p.beta_macro = {0.1};
  p.beta_pico = {0.7};
  p.alpha = {0.4};
  CHECK(lagrangian(z, p, inst) >= utility(z.throughput, inst));
}

TEST_CASE("feasibility accepts a hand-built valid allocation") {
  const NetworkInstance inst = one_pair();
  Allocation a = empty_allocation(inst);
  a.nonabs_macro = {30};
  a.abs_pico = {10};
  a.association = {Association::kMacro, Association::kPico};
  a.x = {30.0, 0.0};
  a.y_abs = {0.0, 10.0};
  a.y_nonabs = {0.0, 30.0};
  a.throughput = {15000.0, 9000.0 + 9000.0};
  a.utility = utility(a.throughput, inst);
  CHECK(check_feasibility(a, inst).ok());
}

TEST_CASE("feasibility names the colliding interference edge") {
  const NetworkInstance inst = one_pair();
  Allocation a = empty_allocation(inst);
  a.nonabs_macro = {40};
  a.abs_pico = {40};
  const FeasibilityReport r = check_feasibility(a, inst);
  REQUIRE(has_kind(r, ViolationKind::kInterference));
  CHECK(r.to_string().find("pico 0, macro 0") != std::string::npos);
}

TEST_CASE("feasibility flags a UE served by both layers") {
  const NetworkInstance inst = one_pair();
  Allocation a = empty_allocation(inst);
  a.nonabs_macro = {30};
  a.abs_pico = {10};
  a.association = {Association::kMacro, Association::kPico};
  a.x = {20.0, 5.0};
  a.y_abs = {0.0, 5.0};
  a.throughput = {10000.0, 1000.0 + 4500.0};
  CHECK(has_kind(check_feasibility(a, inst), ViolationKind::kExclusivity));
}

TEST_CASE("feasibility flags airtime over budget") {
  const NetworkInstance inst = one_pair();
  Allocation a = empty_allocation(inst);
  a.nonabs_macro = {20};
  a.abs_pico = {10};
  a.association = {Association::kMacro, Association::kPico};
  a.x = {21.0, 0.0};
  a.y_abs = {0.0, 11.0};
  a.throughput = {500.0 * 21.0, 900.0 * 11.0};
  const FeasibilityReport r = check_feasibility(a, inst);
  CHECK(has_kind(r, ViolationKind::kMacroAirtime));
  CHECK(has_kind(r, ViolationKind::kPicoAbsAirtime));
}

TEST_CASE("validate rejects broken instances") {
  NetworkInstance inst = one_pair();
  inst.ues[1].rate_pico_nonabs = 1000.0;  // above the ABS rate
  CHECK_THROWS_AS(validate(inst), InvalidInstance);
  inst = one_pair();
  inst.ues[0].best_macro = 3;
  CHECK_THROWS_AS(validate(inst), InvalidInstance);
  inst = one_pair();
  inst.interferers[0] = {2};
  CHECK_THROWS_AS(validate(inst), InvalidInstance);
  inst = one_pair();
  inst.ues[0].weight = 0.0;
  CHECK_THROWS_AS(validate(inst), InvalidInstance);
  CHECK_NOTHROW(validate(one_pair()));
}

}  // TEST_SUITE
