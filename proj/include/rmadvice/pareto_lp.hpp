#pragma once

// The consistency/competitiveness LP for a fixed advice and competitiveness
// target. Its optimum is the best consistency any gamma-competitive online
// algorithm can reach on that advice, and its solution parameterizes the
// switching policy in policy.hpp.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rmadvice/fare_model.hpp"
#include "rmadvice/simplex.hpp"

namespace rmadvice {

/// Raised when an LP that must be feasible and bounded is not solved to
/// optimality.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Variable layout: beta, x_1..x_m, y(1)_1..y(1)_m, ..., y(m)_1..y(m)_m.
struct ParetoLayout {
  std::size_t classes = 0;
  std::size_t beta() const { return 0; }
  std::size_t x(std::size_t j) const { return 1 + j; }
  std::size_t y(std::size_t k, std::size_t j) const { return 1 + classes + k * classes + j; }
  std::size_t num_vars() const { return 1 + classes + classes * classes; }
};

struct ParetoModel {
  LpModel lp;
  ParetoLayout layout;
  int capacity = 0;
  double gamma = 0.0;
  /// Fares inside `lp` are divided by this (the top fare).
  double fare_scale = 1.0;
};

/// Builds the LP. Rows, in order: capacity (one per prefix k), prefix
/// competitiveness (one per k), consistency, then competitiveness on every
/// prefix-plus-block instance (k-major). Ratio rows are multiplied through by
/// their clairvoyant optimum. Throws std::invalid_argument when gamma is
/// outside [0, c(F)].
ParetoModel build_pareto_lp(const FareLadder& ladder, const Advice& advice, double gamma);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double beta_star = 0.0;
  std::vector<double> x;               // accepted quantities on I(A)
  std::vector<std::vector<double>> y;  // y[k][j], block acceptances after prefix k
  double max_violation = 0.0;
  int iterations = 0;
  int capacity = 0;
  double gamma = 0.0;
  bool refined = false;  // (x, y) comes from the second stage

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two stages. The first maximizes beta. The optimum is usually degenerate,
/// so the second holds beta at its optimum (less kRefineSlack) and maximizes
/// sum_k sum_j f_j y(k)_j, which keeps the fallback levels as generous toward
/// high fares as the constraints allow. `refine = false` returns the first
/// stage vertex as is.
LpSolution solve_pareto_lp(const ParetoModel& model, const LpTolerances& tol = {},
                           bool refine = true);

inline constexpr double kRefineSlack = 1e-10;

/// beta(A, gamma) and an optimal (x, y).
LpSolution optimal_consistency(const FareLadder& ladder, const Advice& advice, double gamma);

/// Throws std::invalid_argument unless 0 <= gamma <= c(F) (with round-off slack).
void check_gamma(const FareLadder& ladder, double gamma);

}  // namespace rmadvice
