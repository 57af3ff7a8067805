#pragma once

// Monte-Carlo robustness experiments: noisy instances drawn around an advice
// and average competitive ratios of the LP policy, the best protection-level
// policy and the Ball-Queyranne baseline.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmadvice/fare_model.hpp"
#include "rmadvice/protection_optimizer.hpp"

namespace rmadvice {

/// SplitMix64 (Steele, Lea and Flood). Seed 42 starts with
/// 0xbdd732262feb6e95, 0x28efe333b266f103, 0x47526757130f9f52, 0x581ce1ff0e4ae394.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_zero();
  /// Box-Muller, cosine branch only: consumes two outputs per normal.
  double normal();

private:
  std::uint64_t state_;
};

/// The SplitMix64 output function applied to a single word.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent stream for `index` under a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct NoiseConfig {
  double v = 0.0;  // coefficient of variation, in [0, 1)
  int trials = 1;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless 0 <= v < 1 and trials >= 1.
void check_noise(const NoiseConfig& noise);

/// y_1 = n and y_i = max(floor(x_i), 0) with x_i ~ N(A_i, v A_i) for higher
/// classes, emitted in increasing fare order. Trial t uses the stream
/// derive_seed(noise.seed, t).
Instance sample_instance(const FareLadder& ladder, const Advice& advice, const NoiseConfig& noise,
                         std::uint64_t trial_index);

enum class PolicyKind { LpOptimal, OptimalProtection, BallQueyranne };

std::string_view to_string(PolicyKind kind);
/// Accepts "lp_optimal", "optimal_pl" and "bq".
PolicyKind parse_policy(std::string_view name);

struct CrStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double min = 0.0;
  int trials = 0;
};

/// Summary of ratios in the given order, with pairwise summation.
CrStats summarize(const std::vector<double>& ratios);

CrStats average_cr(const FareLadder& ladder, const Advice& advice, PolicyKind policy, double gamma,
                   const NoiseConfig& noise, double epsilon = kDefaultEpsilon,
                   unsigned threads = 1);

struct SweepRow {
  std::size_t advice_index = 0;
  std::vector<int> advice;
  double v = 0.0;
  double gamma = 0.0;
  PolicyKind policy = PolicyKind::LpOptimal;
  CrStats stats;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Proposition-style stability check on protection levels:
  // Q(I(A))/Opt(A) - Q(I)/Opt(I) <= 2 f_m/f_1 d(I, A).
  long long stability_checks = 0;
  long long stability_violations = 0;
  double stability_max_excess = -1e300;  // max of lhs - rhs
};

struct SweepSpec {
  std::vector<Advice> advice;
  std::vector<double> gammas;
  std::vector<double> v_values;
  std::vector<PolicyKind> policies{PolicyKind::LpOptimal, PolicyKind::OptimalProtection,
                                   PolicyKind::BallQueyranne};
  int trials = 1;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
};

/// Seed used for the (advice, v) cell with flat index a * |v_values| + j.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index);

/// Rows ordered by advice, then v, then gamma, then policy. All gammas and
/// policies of a cell see the same sampled instances. The result does not
/// depend on the thread count.
SweepResult robustness_sweep(const FareLadder& ladder, const SweepSpec& spec,
                             unsigned threads = 1);

}  // namespace rmadvice
