#pragma once

// Online admission policies.
//
// All executors share the nested-cap acceptance rule: a customer of class p
// is accepted up to the largest fraction w in [0, 1] with q_k + w <= Q_k for
// every k >= p, where q_k counts accepted customers of class k or cheaper.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rmadvice/fare_model.hpp"
#include "rmadvice/pareto_lp.hpp"

namespace rmadvice {

/// Nondecreasing cumulative caps Q_1 <= ... <= Q_m. Vectors with Q_m above
/// the capacity are representable but are rejected by the executors.
class ProtectionLevels {
public:
  ProtectionLevels() = default;
  /// Throws std::invalid_argument on negative or decreasing entries.
  explicit ProtectionLevels(std::vector<double> levels);

  std::size_t size() const { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  std::span<const double> values() const { return levels_; }
  double top() const { return levels_.empty() ? 0.0 : levels_.back(); }
  bool feasible(int capacity) const;

private:
  std::vector<double> levels_;
};

struct PolicyTrace {
  std::size_t classes = 0;
  std::vector<int> steps;             // fare class per step
  std::vector<double> accepted;       // w_t
  std::vector<double> q_history;      // q after each step, row-major steps x classes
  std::vector<char> delta_history;    // trigger state after each step
  std::vector<double> revenue_history;
  std::vector<double> q;              // final cumulative acceptances
  std::vector<int> arrivals;
  double revenue = 0.0;
  std::optional<std::size_t> trigger_time;  // 0-based step where the trigger fired
  std::optional<std::size_t> switch_start;  // s, 0-based class
  std::optional<std::size_t> k_star;        // 0-based class
  int k_search_iterations = 0;

  double accepted_total() const { return q.empty() ? 0.0 : q.back(); }
  std::span<const double> q_after(std::size_t t) const {
    return std::span<const double>(q_history).subspan(t * classes, classes);
  }
};

/// Runs a fixed protection-level policy. Throws std::invalid_argument when
/// the levels exceed capacity or have the wrong dimension.
PolicyTrace run_protection_policy(const FareLadder& ladder, const ProtectionLevels& levels,
                                  const Instance& instance);

/// Revenue of the nested-cap rule for any nondecreasing levels, without a
/// capacity check and without recording a trace.
double protection_revenue(const FareLadder& ladder, std::span<const double> levels,
                          const Instance& instance);

/// Same, for a stream given as per-class counts arriving in increasing order.
double protection_revenue_sorted(const FareLadder& ladder, std::span<const double> levels,
                                 std::span<const int> counts);

/// Ball-Queyranne levels Q_i = c(F) n sum_{j<=i} (1 - f_{j-1}/f_j), with Q_m = n.
ProtectionLevels bq_levels(const FareLadder& ladder);

/// Levels used by the switching policy: base[i] = Q'_i = sum_{j<=i} x_j and
/// fallback[k][i] = R(k)_i = Q'_{min(i,k)} + sum_{j<=i} y(k)_j (0-based; the
/// zero entries Q'_0 and R(k)_0 are implicit).
struct SwitchPlan {
  std::vector<double> base;
  std::vector<std::vector<double>> fallback;
  int capacity = 0;
  double beta_star = 0.0;

  std::size_t classes() const { return base.size(); }
};

/// Throws SolverError unless the solution is optimal. Negative round-off in
/// x and y is clipped and levels are capped at the capacity.
SwitchPlan derive_switch_plan(const LpSolution& solution);

/// The LP-based switching algorithm. Phase one follows the base levels while
/// the stream can still conform to the advice; the first arrival that makes
/// a_p > A_p for a class above the lowest advised one fires the trigger, and
/// the policy continues on the fallback levels R(k*).
PolicyTrace run_lp_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                           const Instance& instance, const SwitchPlan& plan);

/// Solves the LP internally.
PolicyTrace run_lp_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                           const Instance& instance);

/// Delayed-trigger variant: fires only when a_p > (1 + epsilon) A_p, and in
/// phase one rejects class-p customers above the lowest advised class once
/// a_p > A_p. Throws std::invalid_argument unless epsilon > 0.
PolicyTrace run_relaxed_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                                double epsilon, const Instance& instance, const SwitchPlan& plan);

}  // namespace rmadvice
