#include "rmadvice/pareto_lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace rmadvice {

void check_gamma(const FareLadder& ladder, double gamma) {
  const double c = bq_bound(ladder);
  if (!(gamma >= 0.0) || gamma > c * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "gamma " << gamma << " must lie in [0, c(F)] with c(F) = " << c;
    throw std::invalid_argument(msg.str());
  }
}

ParetoModel build_pareto_lp(const FareLadder& ladder, const Advice& advice, double gamma) {
  check_gamma(ladder, gamma);
  if (advice.size() != ladder.size())
    throw std::invalid_argument("advice and ladder disagree on the number of classes");

  const std::size_t m = ladder.size();
  const int n = ladder.capacity();
  const double scale = ladder.top_fare();
  std::vector<double> scaled(ladder.fares().begin(), ladder.fares().end());
  for (double& f : scaled) f /= scale;
  const FareLadder unit(scaled, n);

  ParetoModel out;
  out.layout.classes = m;
  out.capacity = n;
  out.gamma = gamma;
  out.fare_scale = scale;
  const ParetoLayout& L = out.layout;
  LpModel& lp = out.lp;

  lp.add_variable("beta", 0.0, 1.0, 1.0);
  for (std::size_t j = 0; j < m; ++j)
    lp.add_variable("x_" + std::to_string(j + 1), 0.0, static_cast<double>(advice.cap_count(j)));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      lp.add_variable("y(" + std::to_string(k + 1) + ")_" + std::to_string(j + 1));

  for (std::size_t k = 0; k < m; ++k) {
    auto& row = lp.add_row(RowSense::LessEqual, n, "capacity k=" + std::to_string(k + 1));
    for (std::size_t j = 0; j <= k; ++j) row.coeffs[L.x(j)] = 1.0;
    for (std::size_t j = 0; j < m; ++j) row.coeffs[L.y(k, j)] = 1.0;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const auto counts = advice_prefix_counts(unit, advice, k);
    auto& row = lp.add_row(RowSense::GreaterEqual, gamma * opt_from_counts(unit, counts),
                           "prefix-comp k=" + std::to_string(k + 1));
    for (std::size_t j = 0; j <= k; ++j) row.coeffs[L.x(j)] = unit.fare(j);
  }
  {
    auto& row = lp.add_row(RowSense::GreaterEqual, 0.0, "consistency");
    for (std::size_t j = 0; j < m; ++j) row.coeffs[L.x(j)] = unit.fare(j);
    row.coeffs[L.beta()] = -advice_opt(unit, advice);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const auto prefix = advice_prefix_counts(unit, advice, k);
    for (std::size_t i = 0; i < m; ++i) {
      auto counts = prefix;
      for (std::size_t j = 0; j <= i; ++j) counts[j] += n;
      auto& row = lp.add_row(RowSense::GreaterEqual, gamma * opt_from_counts(unit, counts),
                             "comp k=" + std::to_string(k + 1) + " i=" + std::to_string(i + 1));
      for (std::size_t j = 0; j <= k; ++j) row.coeffs[L.x(j)] = unit.fare(j);
      for (std::size_t j = 0; j <= i; ++j) row.coeffs[L.y(k, j)] = unit.fare(j);
    }
  }
  return out;
}

LpSolution solve_pareto_lp(const ParetoModel& model, const LpTolerances& tol, bool refine) {
  const LpResult res = solve_lp(model.lp, tol);
  LpSolution sol;
  sol.status = res.status;
  sol.iterations = res.iterations;
  sol.capacity = model.capacity;
  sol.gamma = model.gamma;
  if (res.status != LpStatus::Optimal) return sol;

  const ParetoLayout& L = model.layout;
  const std::size_t m = L.classes;
  sol.beta_star = res.values[L.beta()];
  sol.max_violation = res.max_violation;
  const std::vector<double>* values = &res.values;

  LpResult second;
  if (refine) {
    LpModel lp = model.lp;
    std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
    lp.lower[L.beta()] = std::max(0.0, sol.beta_star - kRefineSlack);
    // fares in the model are already scaled; read them off the consistency row
    const LpRow& consistency = lp.rows[2 * m];
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j) lp.objective[L.y(k, j)] = consistency.coeffs[L.x(j)];
    second = solve_lp(lp, tol);
    sol.iterations += second.iterations;
    if (second.status == LpStatus::Optimal) {
      values = &second.values;
      sol.refined = true;
      sol.max_violation = second.max_violation;
    }
  }

  sol.x.resize(m);
  sol.y.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j) sol.x[j] = (*values)[L.x(j)];
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) sol.y[k][j] = (*values)[L.y(k, j)];
  return sol;
}

LpSolution optimal_consistency(const FareLadder& ladder, const Advice& advice, double gamma) {
  return solve_pareto_lp(build_pareto_lp(ladder, advice, gamma));
}

}  // namespace rmadvice
