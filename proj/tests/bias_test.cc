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

#include "doctest.h"

#include "eicic/bias.hpp"
#include "eicic/evaluate.hpp"
#include "support/fixtures.hpp"

using namespace eicic;
using namespace eicic::bias;
using namespace eicic::testing;

namespace {

// One macro and one pico; UE k has a pico RSRP deficit of gaps[k] dB.
NetworkInstance gap_instance(const std::vector<double>& gaps) {
  NetworkInstance inst = make_instance(1, 1, 40);
  inst.interferers = {{0}};
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    inst.ues.push_back(pico_ue(static_cast<std::uint32_t>(k), 0, 0, 300.0, 900.0, 100.0, -70.0,
                               -70.0 - gaps[k]));
  }
  return inst;
}

std::size_t popcount(const std::vector<bool>& bits) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

}  // namespace

TEST_SUITE("bias") {

TEST_CASE("bias grid values land on decimals") {
  const BiasGrid grid{0.0, 15.0, 0.1};
  const std::vector<double> v = grid.values();
  REQUIRE(v.size() == 151);
  CHECK(v.front() == 0.0);
  CHECK(v[73] == 7.3);
  CHECK(v.back() == 15.0);
}

TEST_CASE("selection rule boundaries") {
  UeRecord ue = pico_ue(0, 0, 0, 1, 1, 1, -80.0, -80.0);
  CHECK(selects_pico(ue, 0.0));
  ue.rsrp_pico = -95.0;
  CHECK(selects_pico(ue, 15.0));
  CHECK_FALSE(selects_pico(ue, 14.9));
}

TEST_CASE("association under bias grows with the bias") {
  const NetworkInstance inst = gap_instance({0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0});
  const std::vector<std::size_t> cand = candidates(inst, 0, 0);
  REQUIRE(cand.size() == 7);
  std::size_t prev = 0;
  for (double b = 0.0; b <= 15.0; b += 0.5) {
    const auto d = association_under_bias(b, cand, inst);
    CHECK(d.size() >= prev);
    prev = d.size();
  }
  CHECK(association_under_bias(0.0, cand, inst).size() == 1);
  CHECK(association_under_bias(15.0, cand, inst).size() == 7);
}

TEST_CASE("fit recovers a threshold association exactly") {
  const NetworkInstance inst = gap_instance({1.0, 3.2, 5.5, 6.8, 7.0, 7.3, 9.0, 12.0});
  std::vector<Association> target(inst.num_ues(), Association::kMacro);
  for (std::size_t u = 0; u < inst.num_ues(); ++u) {
    if (inst.ues[u].rsrp_macro - *inst.ues[u].rsrp_pico <= 7.0) target[u] = Association::kPico;
  }
  const BiasAssignment fit = fit_bias(target, inst, BiasGrid{0.0, 15.0, 0.5});
  CHECK(fit.pico_bias_db[0] == 7.0);
  CHECK(fit.squared_error[0] == 0.0);
}

TEST_CASE("fit defaults to the smallest bias without evidence") {
  NetworkInstance empty = make_instance(1, 1, 40);
  empty.interferers = {{0}};
  empty.ues.push_back(macro_ue(0, 0, 100.0));
  const BiasAssignment a = fit_bias(std::vector<Association>{Association::kMacro}, empty,
                                    BiasGrid{2.0, 15.0, 0.1});
  CHECK(a.pico_bias_db[0] == 2.0);

  const NetworkInstance far = gap_instance({14.0, 14.5});
  const BiasAssignment b = fit_bias(std::vector<Association>(2, Association::kMacro), far,
                                    BiasGrid{0.0, 15.0, 0.1});
  CHECK(b.pico_bias_db[0] == 0.0);
  CHECK(b.squared_error[0] == 0.0);
}

TEST_CASE("fit error does not grow when the grid is refined") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> gaps(12);
    for (double& g : gaps) g = rng.uniform(0, 15);
    NetworkInstance inst = gap_instance(gaps);
    for (UeRecord& ue : inst.ues) ue.weight = rng.uniform(0.5, 2);
    std::vector<Association> target(gaps.size());
    for (auto& a : target) a = rng.uniform() < 0.5 ? Association::kPico : Association::kMacro;
    const double coarse = fit_bias(target, inst, BiasGrid{0, 15, 1.0}).squared_error[0];
    const double mid = fit_bias(target, inst, BiasGrid{0, 15, 0.5}).squared_error[0];
    const double fine = fit_bias(target, inst, BiasGrid{0, 15, 0.1}).squared_error[0];
    CHECK(mid <= coarse + 1e-12);
    CHECK(fine <= mid + 1e-12);
  }
}

TEST_CASE("preprocessing zeroes the forbidden side") {
  const NetworkInstance inst = gap_instance({-1.0, 0.0, 5.0, 15.0, 16.0});
  const NetworkInstance out = bias_constrained_preprocess(inst, 0.0, 15.0);
  CHECK(out.ues[0].rate_macro == 0.0);
  CHECK(out.ues[1].rate_macro == 0.0);
  CHECK(out.ues[2].rate_macro == 300.0);
  CHECK(out.ues[2].rate_pico_abs == 900.0);
  CHECK(out.ues[3].rate_pico_abs == 900.0);
  CHECK(out.ues[4].rate_pico_abs == 0.0);
  CHECK(out.ues[4].rate_pico_nonabs == 0.0);
  CHECK(out.ues[4].rate_macro == 300.0);
}

TEST_CASE("patterns use nested prefixes") {
  NetworkInstance inst = make_instance(2, 1, 40);
  inst.interferers = {{0, 1}};
  const AbsPattern pat = to_patterns(std::vector<int>{5}, std::vector<int>{35, 33}, inst);
  CHECK(popcount(pat.macro_blank[0]) == 5);
  CHECK(popcount(pat.macro_blank[1]) == 7);
  CHECK(popcount(pat.pico_usable[0]) == 5);
  for (int s = 0; s < 5; ++s) CHECK(pat.pico_usable[0][s]);
  CHECK(AbsPattern::bits(pat.macro_blank[0]).substr(0, 6) == "111110");
  CHECK(AbsPattern::bits(pat.macro_blank[0]).size() == 40);

  const AbsPattern none = to_patterns(std::vector<int>{0}, std::vector<int>{40, 40}, inst);
  CHECK(popcount(none.macro_blank[0]) == 0);
  CHECK_THROWS_AS(to_patterns(std::vector<int>{6}, std::vector<int>{35, 33}, inst), PatternError);
}

TEST_CASE("pattern invariants on random counts") {
  Rng rng(12);
  NetworkInstance inst = make_instance(4, 3, 40);
  inst.interferers = {{0, 1}, {1, 2, 3}, {3}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> nonabs(4);
    for (int& n : nonabs) n = static_cast<int>(rng.index(41));
    std::vector<int> abs(3);
    for (std::size_t p = 0; p < 3; ++p) {
      int offer = 40;
      for (std::size_t m : inst.interferers[p]) offer = std::min(offer, 40 - nonabs[m]);
      abs[p] = static_cast<int>(rng.index(static_cast<std::size_t>(offer) + 1));
    }
    const AbsPattern pat = to_patterns(abs, nonabs, inst);
    for (std::size_t m = 0; m < 4; ++m) {
      CHECK(popcount(pat.macro_blank[m]) == static_cast<std::size_t>(40 - nonabs[m]));
      for (std::size_t k = 0; k < 4; ++k) {
        bool a_in_b = true, b_in_a = true;
        for (int s = 0; s < 40; ++s) {
          if (pat.macro_blank[m][s] && !pat.macro_blank[k][s]) a_in_b = false;
          if (pat.macro_blank[k][s] && !pat.macro_blank[m][s]) b_in_a = false;
        }
        CHECK((a_in_b || b_in_a));
      }
    }
    for (std::size_t p = 0; p < 3; ++p) {
      int offer = 40;
      for (std::size_t m : inst.interferers[p]) offer = std::min(offer, 40 - nonabs[m]);
      CHECK(popcount(pat.pico_usable[p]) == static_cast<std::size_t>(offer));
      CHECK(offer >= abs[p]);
    }
  }
}

TEST_CASE("an isolated macro keeps every subframe") {
  NetworkInstance inst = make_instance(2, 1, 40);
  inst.interferers = {{0}};
  inst.ues.push_back(macro_ue(0, 0, 600.0));
  inst.ues.push_back(pico_ue(1, 0, 0, 50.0, 900.0, 150.0, -80.0, -84.0));
  inst.ues.push_back(macro_ue(2, 1, 400.0));
  inst.ues.push_back(macro_ue(3, 1, 700.0));
  evaluate::PipelineConfig config;
  config.solver.max_iterations = 20000;
  const evaluate::ProposedResult r = evaluate::run_proposed(inst, config, 3);
  CHECK(r.allocation.nonabs_macro[1] == 40);
  CHECK(popcount(r.pattern.macro_blank[1]) == 0);
}

}  // TEST_SUITE
