#include "rmadvice/protection_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmadvice/pareto_lp.hpp"

namespace rmadvice {

LevelsCandidate grow_levels_for_beta(const FareLadder& ladder, const Advice& advice, double gamma,
                                     double beta) {
  check_gamma(ladder, gamma);
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (advice.size() != ladder.size())
    throw std::invalid_argument("advice and ladder disagree on the number of classes");

  const std::size_t m = ladder.size();
  const int n = ladder.capacity();
  const double target = beta * advice_opt(ladder, advice);

  // tail[k] = sum_{i>k} N_i f_i
  std::vector<double> tail(m, 0.0);
  for (std::size_t k = m - 1; k-- > 0;)
    tail[k] = tail[k + 1] + advice.cap_count(k + 1) * ladder.fare(k + 1);

  LevelsCandidate out;
  out.beta = beta;
  out.levels.assign(m, 0.0);
  out.c.assign(m, 0.0);
  out.d.assign(m, 0.0);
  std::vector<double>& Q = out.levels;
  std::vector<int> block(m, 0);

  for (std::size_t k = 0; k < m; ++k) {
    // block holds the counts of I(F, k-1) here.
    const double prev_rev = protection_revenue_sorted(ladder, Q, block);
    const double ck = std::max(0.0, (gamma * n * ladder.fare(k) - prev_rev) / ladder.fare(k));
    out.c[k] = ck;
    for (std::size_t i = k; i < m; ++i) Q[i] += ck;

    const auto prefix = advice_prefix_counts(ladder, advice, k);
    const double rev = protection_revenue_sorted(ladder, Q, prefix);
    if (rev + tail[k] < target) {
      const double dk = (target - rev - tail[k]) / ladder.fare(k);
      out.d[k] = dk;
      for (std::size_t i = k; i < m; ++i) Q[i] += dk;
    }
    block[k] = n;
  }
  out.feasible = Q.back() <= n + 1e-9 * n;
  return out;
}

ProtectionResult optimal_protection_levels(const FareLadder& ladder, const Advice& advice,
                                           double gamma, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  check_gamma(ladder, gamma);

  double lo = std::min(1.0, bq_bound(ladder));
  double hi = 1.0;
  ProtectionResult result;
  result.epsilon = epsilon;
  result.gamma = gamma;
  while (hi - lo > epsilon) {
    const double beta = 0.5 * (lo + hi);
    ++result.search_passes;
    if (grow_levels_for_beta(ladder, advice, gamma, beta).feasible) lo = beta;
    else hi = beta;
  }
  result.candidate = grow_levels_for_beta(ladder, advice, gamma, lo);
  if (!result.candidate.feasible)
    throw SolverError("protection levels at the lower search endpoint exceed capacity");
  std::vector<double> q = result.candidate.levels;
  for (double& v : q) v = std::min(v, static_cast<double>(ladder.capacity()));
  result.levels = ProtectionLevels(std::move(q));

  // what the returned levels reach on I(A); never below lo
  const double achieved =
      protection_revenue_sorted(ladder, result.levels.values(), advice.cap_counts()) /
      advice_opt(ladder, advice);
  result.beta_lower = std::max(lo, std::min(achieved, 1.0));
  return result;
}

double protection_consistency(const FareLadder& ladder, const Advice& advice, double gamma,
                              double epsilon) {
  return optimal_protection_levels(ladder, advice, gamma, epsilon).beta_lower;
}

}  // namespace rmadvice
