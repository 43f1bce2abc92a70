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

#include "eicic/inner_pf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eicic::baselines {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PfAllocation empty_allocation(std::size_t n) {
  PfAllocation out;
  out.y_abs.assign(n, 0.0);
  out.y_nonabs.assign(n, 0.0);
  out.throughput.assign(n, 0.0);
  return out;
}

void fill_throughput(std::span<const PfMember> members, PfAllocation& out) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    out.throughput[i] = members[i].rate_abs * out.y_abs[i] +
                        members[i].rate_nonabs * out.y_nonabs[i];
  }
}

// Splits `frames` of one resource in proportion to weight among members whose
// rate in that resource is positive. Returns the resource price.
double split_single_resource(std::span<const PfMember> members, double frames,
                             bool abs_resource, PfAllocation& out) {
  double weight = 0.0;
  for (const PfMember& m : members) {
    const double r = abs_resource ? m.rate_abs : m.rate_nonabs;
    if (r > 0.0) weight += m.weight;
  }
  if (weight == 0.0 || frames <= 0.0) return 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double r = abs_resource ? members[i].rate_abs : members[i].rate_nonabs;
    if (r <= 0.0) continue;
    const double y = members[i].weight * frames / weight;
    (abs_resource ? out.y_abs : out.y_nonabs)[i] = y;
  }
  return weight / frames;
}

// Price of a resource nobody is allowed to buy: the highest marginal value.
double saturating_price(std::span<const PfMember> members,
                        const PfAllocation& out, bool abs_resource) {
  double price = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (out.throughput[i] <= 0.0) continue;
    const double r = abs_resource ? members[i].rate_abs : members[i].rate_nonabs;
    price = std::max(price, members[i].weight * r / out.throughput[i]);
  }
  return price;
}

}  // namespace

PfAllocation macro_pf_allocation(std::span<const PfMember> members,
                                 double frames, const std::string& cell) {
  PfAllocation out = empty_allocation(members.size());
  if (members.empty()) return out;
  const bool any_rate = std::any_of(members.begin(), members.end(),
                                    [](const PfMember& m) { return m.rate_abs > 0.0; });
  if (!any_rate) throw ZeroRateCell(cell + ": every member rate is zero");
  out.price_abs = split_single_resource(members, frames, true, out);
  fill_throughput(members, out);
  return out;
}

PfAllocation pico_pf_allocation(std::span<const PfMember> members,
                                double abs_frames, double total_frames,
                                const std::string& cell) {
  const std::size_t n = members.size();
  PfAllocation out = empty_allocation(n);
  if (n == 0) return out;

  std::vector<std::size_t> served;
  for (std::size_t i = 0; i < n; ++i) {
    if (members[i].rate_abs > 0.0 || members[i].rate_nonabs > 0.0) {
      served.push_back(i);
    }
  }
  if (served.empty()) throw ZeroRateCell(cell + ": every member rate is zero");

  const double abs_budget = std::max(0.0, abs_frames);
  const double nonabs_budget = std::max(0.0, total_frames - abs_budget);
  const bool any_abs = std::any_of(served.begin(), served.end(), [&](std::size_t i) {
    return members[i].rate_abs > 0.0;
  });
  const bool any_nonabs = std::any_of(served.begin(), served.end(), [&](std::size_t i) {
    return members[i].rate_nonabs > 0.0;
  });

  // Degenerate markets with a single usable resource.
  if (abs_budget <= 0.0 || !any_abs) {
    out.price_nonabs = split_single_resource(members, nonabs_budget, false, out);
    fill_throughput(members, out);
    out.price_abs = saturating_price(members, out, true);
    return out;
  }
  if (nonabs_budget <= 0.0 || !any_nonabs) {
    out.price_abs = split_single_resource(members, abs_budget, true, out);
    fill_throughput(members, out);
    out.price_nonabs = saturating_price(members, out, false);
    return out;
  }

  auto ratio = [&](std::size_t i) {
    const PfMember& m = members[i];
    return m.rate_nonabs > 0.0 ? m.rate_abs / m.rate_nonabs : kInf;
  };
  std::stable_sort(served.begin(), served.end(),
                   [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });

  const std::size_t k = served.size();
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    prefix[j + 1] = prefix[j] + members[served[j]].weight;
  }
  const double total_weight = prefix[k];

  // Candidate equilibria: member `marginal` spends share theta on ABS; all
  // earlier members buy only ABS and all later ones only non-ABS.
  std::size_t best_marginal = 0;
  double best_theta = 1.0;
  double best_violation = kInf;
  auto consider = [&](std::size_t marginal, double theta, double violation) {
    if (violation < best_violation) {
      best_violation = violation;
      best_marginal = marginal;
      best_theta = std::clamp(theta, 0.0, 1.0);
    }
  };

  for (std::size_t j = 0; j < k; ++j) {
    const double w = members[served[j]].weight;
    const double before = prefix[j];
    const double after = total_weight - prefix[j + 1];
    const double rho = ratio(served[j]);
    if (std::isinf(rho)) {
      // Members without a non-ABS rate never buy non-ABS subframes; the split
      // is only an equilibrium if nobody else does either.
      consider(j, 1.0, after > 0.0 ? kInf : 0.0);
      continue;
    }
    const double theta = (rho * abs_budget * (after + w) - before * nonabs_budget) /
                         (w * (nonabs_budget + rho * abs_budget));
    consider(j, theta, std::max({0.0, -theta, theta - 1.0}));
  }
  // Full cuts: the first c members buy ABS, the rest non-ABS, and the price
  // ratio falls strictly between two member ratios.
  for (std::size_t c = 1; c < k; ++c) {
    const double price_abs = prefix[c] / abs_budget;
    const double price_nonabs = (total_weight - prefix[c]) / nonabs_budget;
    const double rho = price_abs / price_nonabs;
    const double hi = ratio(served[c - 1]);
    const double lo = ratio(served[c]);
    const double violation = std::max(0.0, rho - hi) / rho + std::max(0.0, lo - rho) / rho;
    // Represent the cut as member c-1 fully on ABS.
    consider(c - 1, 1.0, violation);
  }

  const double w_marginal = members[served[best_marginal]].weight;
  const double spend_abs = prefix[best_marginal] + best_theta * w_marginal;
  const double spend_nonabs = total_weight - spend_abs;
  out.price_abs = spend_abs / abs_budget;
  out.price_nonabs = spend_nonabs / nonabs_budget;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = served[j];
    const double w = members[i].weight;
    double on_abs = 0.0;
    if (j < best_marginal) {
      on_abs = w;
    } else if (j == best_marginal) {
      on_abs = best_theta * w;
    }
    const double on_nonabs = w - on_abs;
    if (on_abs > 0.0) out.y_abs[i] = on_abs / out.price_abs;
    if (on_nonabs > 0.0) out.y_nonabs[i] = on_nonabs / out.price_nonabs;
  }
  fill_throughput(members, out);
  return out;
}

double pico_kkt_residual(std::span<const PfMember> members,
                         const PfAllocation& allocation, double abs_frames,
                         double total_frames) {
  double residual = 0.0;
  double sum_abs = 0.0;
  double sum_total = 0.0;
  bool any_abs = false;
  bool any_nonabs = false;
  const double abs_budget = std::max(0.0, abs_frames);
  const double nonabs_budget = std::max(0.0, total_frames - abs_budget);
  auto price_gap = [&residual](double marginal, double price, bool used) {
    if (price <= 0.0) {
      if (marginal > 0.0) residual = std::max(residual, 1.0);
      return;
    }
    const double gap = (marginal - price) / price;
    residual = std::max(residual, used ? std::abs(gap) : std::max(0.0, gap));
  };
  for (std::size_t i = 0; i < members.size(); ++i) {
    const PfMember& m = members[i];
    sum_abs += allocation.y_abs[i];
    sum_total += allocation.y_abs[i] + allocation.y_nonabs[i];
    any_abs = any_abs || m.rate_abs > 0.0;
    any_nonabs = any_nonabs || m.rate_nonabs > 0.0;
    const double r = allocation.throughput[i];
    if (r <= 0.0) continue;
    if (abs_budget > 0.0) {
      price_gap(m.weight * m.rate_abs / r, allocation.price_abs,
                allocation.y_abs[i] > 0.0);
    }
    if (nonabs_budget > 0.0) {
      price_gap(m.weight * m.rate_nonabs / r, allocation.price_nonabs,
                allocation.y_nonabs[i] > 0.0);
    }
  }
  const double scale = std::max(1.0, total_frames);
  if (any_abs && abs_budget > 0.0) {
    residual = std::max(residual, std::abs(sum_abs - abs_budget) / scale);
  }
  if (any_nonabs && total_frames > 0.0) {
    residual = std::max(residual, std::abs(sum_total - total_frames) / scale);
  }
  return residual;
}

}  // namespace eicic::baselines
