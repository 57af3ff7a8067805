#include "rmadvice/frontier.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "rmadvice/parallel.hpp"
#include "rmadvice/pareto_lp.hpp"
#include "rmadvice/policy.hpp"

namespace rmadvice {

std::vector<double> default_gamma_grid(const FareLadder& ladder, std::size_t points) {
  if (points == 0) return {};
  const double c = bq_bound(ladder);
  if (points == 1) return {c};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = c * static_cast<double>(i) / static_cast<double>(points - 1);
  grid.back() = c;
  return grid;
}

FrontierCurve consistency_frontier(const FareLadder& ladder, const Advice& advice,
                                   const std::vector<double>& gamma_grid, double epsilon,
                                   unsigned threads) {
  if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
  if (!std::is_sorted(gamma_grid.begin(), gamma_grid.end()))
    throw std::invalid_argument("gamma grid must be sorted");
  for (double g : gamma_grid) check_gamma(ladder, g);

  FrontierCurve curve;
  curve.gammas = gamma_grid;
  curve.epsilon = epsilon;
  curve.beta_lp.assign(gamma_grid.size(), 0.0);
  curve.beta_pl.assign(gamma_grid.size(), 0.0);
  parallel_for(gamma_grid.size(), threads, [&](std::size_t i) {
    const LpSolution sol = optimal_consistency(ladder, advice, gamma_grid[i]);
    if (!sol.optimal())
      throw SolverError(std::string("consistency LP not solved to optimality: ") +
                        to_string(sol.status));
    curve.beta_lp[i] = sol.beta_star;
    curve.beta_pl[i] = protection_consistency(ladder, advice, gamma_grid[i], epsilon);
  });
  curve.bq_consistency =
      protection_revenue(ladder, bq_levels(ladder).values(), advice_instance(ladder, advice)) /
      advice_opt(ladder, advice);
  return curve;
}

double relative_suboptimality(const FrontierCurve& curve) {
  double rs = 0.0;
  for (std::size_t i = 0; i < curve.gammas.size(); ++i)
    if (curve.beta_lp[i] > 0.0)
      rs = std::max(rs, (curve.beta_lp[i] - curve.beta_pl[i]) / curve.beta_lp[i]);
  return rs;
}

double relative_suboptimality(const FareLadder& ladder, const Advice& advice,
                              const std::vector<double>& gamma_grid, double epsilon) {
  return relative_suboptimality(consistency_frontier(ladder, advice, gamma_grid, epsilon));
}

std::vector<Advice> advice_grid(const FareLadder& ladder, int step) {
  const int n = ladder.capacity();
  if (step <= 0 || n % step != 0)
    throw std::invalid_argument("grid step must be a positive divisor of the capacity");
  const std::size_t m = ladder.size();
  const int units = n / step;

  std::vector<Advice> out;
  std::vector<int> parts(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == m) {
      parts[i] = left;
      std::vector<int> counts(m);
      for (std::size_t j = 0; j < m; ++j) counts[j] = parts[j] * step;
      if (counts[0] == 0) {
        std::size_t top = m;
        while (top-- > 0 && counts[top] == 0) {}
        counts[top] -= 1;
        counts[0] = 1;
      }
      out.emplace_back(ladder, std::move(counts));
      return;
    }
    for (int u = 0; u <= left; ++u) {
      parts[i] = u;
      rec(i + 1, left - u);
    }
  };
  rec(0, units);
  return out;
}

}  // namespace rmadvice
