#pragma once

// Best consistency reachable by a single gamma-competitive protection-level
// policy, found by bisection on beta over a minimal-capacity forward pass.

#include <vector>

#include "rmadvice/fare_model.hpp"
#include "rmadvice/policy.hpp"

namespace rmadvice {

/// Levels produced by one forward pass. Q_k = sum_{j<=k} (c_j + d_j); the
/// pass may overshoot the capacity, in which case `feasible` is false.
struct LevelsCandidate {
  std::vector<double> levels;
  std::vector<double> c;  // increments for competitiveness on I(F, k)
  std::vector<double> d;  // increments for consistency on I(A)
  double beta = 0.0;
  bool feasible = false;
};

/// For k = 1..m, raise Q_k just enough to earn gamma Opt(I(F,k)) on I(F,k),
/// then just enough that accepting everything above class k on I(A) would
/// still reach beta Opt(A). Increments are clamped at zero.
LevelsCandidate grow_levels_for_beta(const FareLadder& ladder, const Advice& advice, double gamma,
                                     double beta);

struct ProtectionResult {
  ProtectionLevels levels;
  /// Certified consistency: beta^PL - epsilon <= beta_lower <= beta^PL. The larger of
  /// the bisection lower end and the ratio the levels reach on I(A).
  double beta_lower = 0.0;
  LevelsCandidate candidate;
  int search_passes = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
};

inline constexpr double kDefaultEpsilon = 1e-6;

/// Bisection on beta over [c(F), 1] until the bracket is at most epsilon
/// wide. Throws std::invalid_argument on bad parameters and SolverError if
/// the pass at beta = c(F) is infeasible.
ProtectionResult optimal_protection_levels(const FareLadder& ladder, const Advice& advice,
                                           double gamma, double epsilon = kDefaultEpsilon);

double protection_consistency(const FareLadder& ladder, const Advice& advice, double gamma,
                              double epsilon = kDefaultEpsilon);

}  // namespace rmadvice
