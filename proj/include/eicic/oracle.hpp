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

// Exhaustive ground truth for tiny instances and the optimality-gap metric.

#ifndef EICIC_ORACLE_HPP
#define EICIC_ORACLE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "eicic/model.hpp"
#include "eicic/rng.hpp"
#include "eicic/solver.hpp"

namespace eicic::oracle {

inline constexpr double kMaxEnumeration = 1e7;

class SizeError : public std::length_error {
 public:
  SizeError(double count, const std::string& what)
      : std::length_error(what), count_(count) {}
  double count() const noexcept { return count_; }

 private:
  double count_;
};

struct OracleOptions {
  double max_enumeration = kMaxEnumeration;
  int jobs = 1;
};

struct OracleResult {
  Allocation allocation;
  double enumerated = 0.0;  // association vectors x macro blank tuples
};

// Number of (association, N) configurations brute_force_opt would visit.
double enumeration_size(const NetworkInstance& instance);

// Enumerates every association of pico-eligible UEs and every N_m in
// [0, n_sf]; each pico takes A_p = min over interferers of (n_sf - N_m),
// which is never worse than a smaller A_p at fixed association because
// non-ABS airtime can stand in for ABS airtime at no gain. Airtimes inside a
// cell are split proportionally fair. Configurations leaving some UE without
// throughput are skipped. Ties keep the first configuration in enumeration
// order (association bits, then N tuples with macro 0 varying fastest).
OracleResult brute_force_opt(const NetworkInstance& instance,
                             const OracleOptions& options = {});

// Smallest g with sum w ln R_alg >= sum w ln ((1 - g) R_rel); 0 when the
// algorithm already matches the reference.
double optimality_gap(std::span<const double> alg_throughput,
                      std::span<const double> rel_throughput,
                      const NetworkInstance& instance);

// Same metric from utilities directly.
double optimality_gap_from_utility(double alg_utility, double rel_utility,
                                   double total_weight);

struct TinyOptions {
  std::size_t max_macros = 2;
  std::size_t max_picos = 2;
  std::size_t max_ues = 8;
  int n_sf = 8;
};

// Random instance with 1..max cells of each kind and 2..max_ues UEs. Each
// interference edge is present with probability 0.7 and each UE has a
// candidate pico with probability 0.7.
NetworkInstance random_tiny_instance(Rng& rng, const TinyOptions& options = {});

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t ues = 0;
  std::int64_t iterations = 0;  // longest component run
  double algorithm_utility = 0.0;
  double oracle_utility = 0.0;
  double gap = 0.0;  // against the oracle
  bool feasible = false;
  // Util(2 (1 + delta) R_alg) >= Util(R_opt), delta = exp(epsilon) - 1.
  bool approximation_holds = false;
};

struct VerificationReport {
  std::vector<TrialRecord> trials;
  double median_efficiency = 0.0;  // median of 1 - g
  double min_efficiency = 0.0;
  double max_gap = 0.0;
  std::size_t approximation_passes = 0;
  std::size_t feasible = 0;
};

// Solves `trials` tiny instances with the full relax-and-round pipeline and
// compares each against brute_force_opt. Trial t draws its instance and
// solver seed from derive_seed(seed, t).
VerificationReport verify_tiny(std::size_t trials, std::uint64_t seed,
                               const solver::SolverConfig& config,
                               const TinyOptions& options = {}, int jobs = 1);

}  // namespace eicic::oracle

#endif  // EICIC_ORACLE_HPP
