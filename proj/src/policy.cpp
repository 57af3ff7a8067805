#include "rmadvice/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmadvice {

namespace {

// Slack used when comparing running counts against levels.
double count_tol(int capacity) { return 1e-9 * static_cast<double>(capacity); }

double accept_fraction(std::span<const double> levels, std::span<const double> q, std::size_t p) {
  double w = 1.0;
  for (std::size_t k = p; k < levels.size(); ++k) w = std::min(w, levels[k] - q[k]);
  return std::max(0.0, w);
}

void record(PolicyTrace& trace, int p, double w, double fare, bool delta) {
  trace.steps.push_back(p);
  trace.accepted.push_back(w);
  trace.revenue += w * fare;
  trace.q_history.insert(trace.q_history.end(), trace.q.begin(), trace.q.end());
  trace.delta_history.push_back(delta ? 1 : 0);
  trace.revenue_history.push_back(trace.revenue);
}

PolicyTrace empty_trace(const FareLadder& ladder, const Instance& instance) {
  PolicyTrace trace;
  trace.classes = ladder.size();
  trace.q.assign(ladder.size(), 0.0);
  trace.arrivals.assign(ladder.size(), 0);
  const std::size_t T = instance.length();
  trace.steps.reserve(T);
  trace.accepted.reserve(T);
  trace.q_history.reserve(T * ladder.size());
  trace.delta_history.reserve(T);
  trace.revenue_history.reserve(T);
  return trace;
}

void check_steps(const FareLadder& ladder, const Instance& instance) {
  for (int s : instance)
    if (s < 0 || static_cast<std::size_t>(s) >= ladder.size())
      throw std::invalid_argument("instance step " + std::to_string(s) +
                                  " is not a valid fare class");
}

}  // namespace

ProtectionLevels::ProtectionLevels(std::vector<double> levels) : levels_(std::move(levels)) {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i]) || levels_[i] < 0.0)
      throw std::invalid_argument("protection levels must be finite and nonnegative");
    if (i > 0 && levels_[i] < levels_[i - 1])
      throw std::invalid_argument("protection levels must be nondecreasing");
  }
}

bool ProtectionLevels::feasible(int capacity) const {
  return top() <= static_cast<double>(capacity) + count_tol(capacity);
}

PolicyTrace run_protection_policy(const FareLadder& ladder, const ProtectionLevels& levels,
                                  const Instance& instance) {
  if (levels.size() != ladder.size())
    throw std::invalid_argument("protection levels need one entry per fare class");
  if (!levels.feasible(ladder.capacity()))
    throw std::invalid_argument("protection levels exceed the capacity");
  check_steps(ladder, instance);

  PolicyTrace trace = empty_trace(ladder, instance);
  for (int s : instance) {
    const auto p = static_cast<std::size_t>(s);
    ++trace.arrivals[p];
    const double w = accept_fraction(levels.values(), trace.q, p);
    for (std::size_t k = p; k < trace.q.size(); ++k) trace.q[k] += w;
    record(trace, s, w, ladder.fare(p), false);
  }
  return trace;
}

double protection_revenue(const FareLadder& ladder, std::span<const double> levels,
                          const Instance& instance) {
  std::vector<double> q(ladder.size(), 0.0);
  double revenue = 0.0;
  for (int s : instance) {
    const auto p = static_cast<std::size_t>(s);
    const double w = accept_fraction(levels, q, p);
    if (w <= 0.0) continue;
    for (std::size_t k = p; k < q.size(); ++k) q[k] += w;
    revenue += w * ladder.fare(p);
  }
  return revenue;
}

double protection_revenue_sorted(const FareLadder& ladder, std::span<const double> levels,
                                 std::span<const int> counts) {
  // With increasing arrivals, class p sees q_k = q_{p-1} for all k >= p, so a
  // whole block is accepted at once.
  double accepted = 0.0;
  double revenue = 0.0;
  for (std::size_t p = 0; p < counts.size(); ++p) {
    if (counts[p] == 0) continue;
    double room = static_cast<double>(counts[p]);
    for (std::size_t k = p; k < levels.size(); ++k) room = std::min(room, levels[k] - accepted);
    room = std::max(0.0, room);
    accepted += room;
    revenue += room * ladder.fare(p);
  }
  return revenue;
}

ProtectionLevels bq_levels(const FareLadder& ladder) {
  const double c = bq_bound(ladder);
  const double n = ladder.capacity();
  std::vector<double> q(ladder.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    sum += 1.0 - ladder.fare_below(i) / ladder.fare(i);
    q[i] = std::min(n, sum * c * n);
  }
  q.back() = n;
  return ProtectionLevels(std::move(q));
}

SwitchPlan derive_switch_plan(const LpSolution& solution) {
  if (!solution.optimal())
    throw SolverError(std::string("cannot derive levels from a non-optimal LP solution (") +
                      to_string(solution.status) + ")");
  const std::size_t m = solution.x.size();
  const double n = solution.capacity;
  SwitchPlan plan;
  plan.capacity = solution.capacity;
  plan.beta_star = solution.beta_star;
  plan.base.resize(m);
  double run = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    run += std::max(0.0, solution.x[i]);
    plan.base[i] = std::min(run, n);
  }
  plan.fallback.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    double ysum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ysum += std::max(0.0, solution.y[k][i]);
      plan.fallback[k][i] = std::min(plan.base[std::min(i, k)] + ysum, n);
    }
  }
  return plan;
}

namespace {

PolicyTrace run_switching(const FareLadder& ladder, const Advice& advice, double gamma,
                          const Instance& instance, const SwitchPlan& plan,
                          std::optional<double> relax) {
  check_gamma(ladder, gamma);
  const std::size_t m = ladder.size();
  if (advice.size() != m || plan.classes() != m || plan.fallback.size() != m)
    throw std::invalid_argument("switch plan, advice and ladder disagree on the number of classes");
  check_steps(ladder, instance);

  const double tol = count_tol(ladder.capacity());
  const std::size_t lowest = advice.lowest_index();
  const double factor = relax ? 1.0 + *relax : 1.0;

  PolicyTrace trace = empty_trace(ladder, instance);
  bool delta = false;
  std::span<const double> active = plan.base;

  for (std::size_t t = 0; t < instance.length(); ++t) {
    const auto p = static_cast<std::size_t>(instance[t]);
    const int a = ++trace.arrivals[p];

    if (!delta && p > lowest && static_cast<double>(a) > factor * advice.count(p)) {
      delta = true;
      trace.trigger_time = t;
      // s: highest class whose base level is exhausted (first class if none).
      std::size_t s = 0;
      for (std::size_t j = m; j-- > 0;) {
        if (std::abs(trace.q[j] - plan.base[j]) <= tol) {
          s = j;
          break;
        }
      }
      trace.switch_start = s;
      std::size_t k = s;
      while (true) {
        ++trace.k_search_iterations;
        const auto& r = plan.fallback[k];
        std::size_t bad = m;
        for (std::size_t j = 0; j < m; ++j) {
          if (trace.q[j] > r[j] + tol) {
            bad = j;
            break;
          }
        }
        if (bad == m) break;
        if (bad <= k || trace.k_search_iterations > static_cast<int>(m))
          throw std::logic_error("fallback search did not advance; plan is not LP-optimal");
        k = bad;
      }
      trace.k_star = k;
      active = plan.fallback[k];
    }

    double w = 0.0;
    const bool gated = relax && !delta && p > lowest && a > advice.count(p);
    if (!gated) {
      w = accept_fraction(active, trace.q, p);
      for (std::size_t k = p; k < m; ++k) trace.q[k] += w;
    }
    record(trace, static_cast<int>(p), w, ladder.fare(p), delta);
  }
  return trace;
}

}  // namespace

PolicyTrace run_lp_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                           const Instance& instance, const SwitchPlan& plan) {
  return run_switching(ladder, advice, gamma, instance, plan, std::nullopt);
}

PolicyTrace run_lp_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                           const Instance& instance) {
  const SwitchPlan plan = derive_switch_plan(optimal_consistency(ladder, advice, gamma));
  return run_switching(ladder, advice, gamma, instance, plan, std::nullopt);
}

PolicyTrace run_relaxed_optimal(const FareLadder& ladder, const Advice& advice, double gamma,
                                double epsilon, const Instance& instance, const SwitchPlan& plan) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("relaxation epsilon must be positive");
  return run_switching(ladder, advice, gamma, instance, plan, epsilon);
}

}  // namespace rmadvice
