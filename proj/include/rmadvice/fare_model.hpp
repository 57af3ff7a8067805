#pragma once

// Single-leg domain model: fare ladders, advice, customer streams and the
// instance families used to reason about consistency and competitiveness.
//
// Fare classes are 0-based in the library: class 0 is the cheapest fare.
// Files and the command line use 1-based fare indices.

#include <cstddef>
#include <span>
#include <vector>

namespace rmadvice {

/// Ordered fare classes f_1 < ... < f_m together with the capacity n.
class FareLadder {
public:
  /// Throws std::invalid_argument unless fares are nonempty, positive and
  /// strictly increasing and capacity >= 1.
  FareLadder(std::vector<double> fares, int capacity);

  std::size_t size() const { return fares_.size(); }
  int capacity() const { return capacity_; }
  double fare(std::size_t i) const { return fares_[i]; }
  /// f_{i-1}, with the zero sentinel below the cheapest class.
  double fare_below(std::size_t i) const { return i == 0 ? 0.0 : fares_[i - 1]; }
  double top_fare() const { return fares_.back(); }
  std::span<const double> fares() const { return fares_; }

private:
  std::vector<double> fares_;
  int capacity_;
};

FareLadder make_fare_ladder(std::vector<double> fares, int capacity);

/// Predicted per-class counts of the n most valuable customers.
class Advice {
public:
  /// Throws std::invalid_argument unless counts has one nonnegative entry per
  /// class and sums to the capacity.
  Advice(const FareLadder& ladder, std::vector<int> counts);

  std::size_t size() const { return counts_.size(); }
  int count(std::size_t i) const { return counts_[i]; }
  std::span<const int> counts() const { return counts_; }
  /// Lowest class with a positive prediction (0-based).
  std::size_t lowest_index() const { return lowest_; }
  /// Number of class-i customers in the largest conforming instance:
  /// n for classes up to the lowest advised class, A_i above it.
  int cap_count(std::size_t i) const { return caps_[i]; }
  std::span<const int> cap_counts() const { return caps_; }

private:
  std::vector<int> counts_;
  std::vector<int> caps_;
  std::size_t lowest_ = 0;
};

/// A customer stream; each step is a 0-based fare class.
class Instance {
public:
  Instance() = default;
  explicit Instance(std::vector<int> steps) : steps_(std::move(steps)) {}

  std::size_t length() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  int operator[](std::size_t t) const { return steps_[t]; }
  std::span<const int> steps() const { return steps_; }
  auto begin() const { return steps_.begin(); }
  auto end() const { return steps_.end(); }

  /// Arrivals per class. Throws std::invalid_argument on an out-of-range step.
  std::vector<int> class_counts(std::size_t classes) const;

  friend bool operator==(const Instance&, const Instance&) = default;

private:
  std::vector<int> steps_;
};

/// Validates every step against the ladder.
Instance make_instance(const FareLadder& ladder, std::vector<int> steps);

/// Slack parameters of near-conformance.
struct ConformanceParams {
  double mu = 0.0;
  double nu = 0.0;
};

/// c(F) = [sum_i (1 - f_{i-1}/f_i)]^{-1}, the best achievable competitive ratio.
double bq_bound(const FareLadder& ladder);

/// Revenue of the top n customers described by per-class counts.
double opt_from_counts(const FareLadder& ladder, std::span<const int> counts);

/// Clairvoyant optimum: sum of the n highest fares in the stream.
double opt_revenue(const FareLadder& ladder, const Instance& instance);

/// Opt(A) = sum_i f_i A_i.
double advice_opt(const FareLadder& ladder, const Advice& advice);

/// Membership in S(A): exact counts above the lowest advised class and at
/// least A_l customers of the lowest advised class.
bool conforms(const Advice& advice, const Instance& instance);

/// Membership in S(A, mu, nu).
bool conforms_relaxed(const Advice& advice, const Instance& instance,
                      const ConformanceParams& params);

/// I(A): n customers of every class up to the lowest advised one, then A_i
/// customers of each higher class, in increasing fare order.
Instance advice_instance(const FareLadder& ladder, const Advice& advice);

/// I(A, k): I(A) truncated after the block of class k (0-based).
Instance advice_prefix(const FareLadder& ladder, const Advice& advice, std::size_t k);

/// Per-class counts of I(A, k).
std::vector<int> advice_prefix_counts(const FareLadder& ladder, const Advice& advice,
                                      std::size_t k);

/// I(F, i): n customers of each class 0..i in increasing order.
Instance block_instance(const FareLadder& ladder, std::size_t i);

Instance concat(const Instance& a, const Instance& b);

/// The hard family: I(A,k) + I(F,i) for all k, i, followed by the bare
/// prefixes I(A,k). Ordering: (k, i) row-major, then prefixes by k.
std::vector<Instance> hard_instances(const FareLadder& ladder, const Advice& advice);

/// d(I, A) = (A_l - K_I(l))^+ + sum_{j > l} |A_j - K_I(j)|.
int advice_distance(const FareLadder& ladder, const Instance& instance, const Advice& advice);

}  // namespace rmadvice
