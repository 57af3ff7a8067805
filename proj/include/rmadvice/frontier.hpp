#pragma once

// Consistency/competitiveness frontiers over gamma grids, and the relative
// sub-optimality of protection-level policies.

#include <cstddef>
#include <vector>

#include "rmadvice/fare_model.hpp"
#include "rmadvice/protection_optimizer.hpp"

namespace rmadvice {

struct FrontierCurve {
  std::vector<double> gammas;
  std::vector<double> beta_lp;  // beta(A, gamma)
  std::vector<double> beta_pl;  // certified lower end of beta^PL(A, gamma)
  double bq_consistency = 0.0;  // Ball-Queyranne levels on I(A), over Opt(A)
  double epsilon = kDefaultEpsilon;
};

/// `points` evenly spaced values on [0, c(F)], endpoints included.
std::vector<double> default_gamma_grid(const FareLadder& ladder, std::size_t points = 41);

/// Throws std::invalid_argument if the grid is empty, unsorted, or leaves
/// [0, c(F)]; SolverError if an LP fails.
FrontierCurve consistency_frontier(const FareLadder& ladder, const Advice& advice,
                                   const std::vector<double>& gamma_grid,
                                   double epsilon = kDefaultEpsilon, unsigned threads = 1);

/// max over the grid of (beta_lp - beta_pl) / beta_lp, floored at zero.
double relative_suboptimality(const FrontierCurve& curve);

double relative_suboptimality(const FareLadder& ladder, const Advice& advice,
                              const std::vector<double>& gamma_grid,
                              double epsilon = kDefaultEpsilon);

/// All advice whose counts are multiples of `step`, in lexicographic order.
/// Any advice with A_1 = 0 is shifted to A_1 = 1 by taking one unit from its
/// highest positive class.
std::vector<Advice> advice_grid(const FareLadder& ladder, int step);

}  // namespace rmadvice
