#include "rmadvice/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "rmadvice/parallel.hpp"
#include "rmadvice/pareto_lp.hpp"
#include "rmadvice/policy.hpp"

namespace rmadvice {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPow53 = 9007199254740992.0;

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) / kTwoPow53; }

double SplitMix64::uniform_open_zero() {
  return static_cast<double>((next() >> 11) + 1) / kTwoPow53;
}

double SplitMix64::normal() {
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGolden));
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index) {
  return derive_seed(seed, 0x5eed0000ULL + cell_index);
}

void check_noise(const NoiseConfig& noise) {
  if (!(noise.v >= 0.0 && noise.v < 1.0))
    throw std::invalid_argument("coefficient of variation must lie in [0, 1)");
  if (noise.trials < 1) throw std::invalid_argument("trials must be at least 1");
}

Instance sample_instance(const FareLadder& ladder, const Advice& advice, const NoiseConfig& noise,
                         std::uint64_t trial_index) {
  check_noise(noise);
  if (advice.size() != ladder.size())
    throw std::invalid_argument("advice and ladder disagree on the number of classes");
  SplitMix64 rng(derive_seed(noise.seed, trial_index));
  const std::size_t m = ladder.size();
  std::vector<int> y(m, 0);
  y[0] = ladder.capacity();
  for (std::size_t i = 1; i < m; ++i) {
    const double a = advice.count(i);
    // drawn even when A_i = 0 so streams stay aligned across advices
    const double z = rng.normal();
    y[i] = std::max(0, static_cast<int>(std::floor(a + noise.v * a * z)));
  }
  std::vector<int> steps;
  for (std::size_t i = 0; i < m; ++i) steps.insert(steps.end(), y[i], static_cast<int>(i));
  return Instance(std::move(steps));
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::LpOptimal: return "lp_optimal";
    case PolicyKind::OptimalProtection: return "optimal_pl";
    case PolicyKind::BallQueyranne: return "bq";
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "lp_optimal") return PolicyKind::LpOptimal;
  if (name == "optimal_pl") return PolicyKind::OptimalProtection;
  if (name == "bq") return PolicyKind::BallQueyranne;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected lp_optimal, optimal_pl or bq)");
}

CrStats summarize(const std::vector<double>& ratios) {
  CrStats s;
  s.trials = static_cast<int>(ratios.size());
  if (ratios.empty()) return s;
  const double n = static_cast<double>(ratios.size());
  s.mean = pairwise_sum(ratios.data(), ratios.size()) / n;
  s.min = *std::min_element(ratios.begin(), ratios.end());
  if (ratios.size() > 1) {
    std::vector<double> sq(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) sq[i] = (ratios[i] - s.mean) * (ratios[i] - s.mean);
    s.std = std::sqrt(pairwise_sum(sq.data(), sq.size()) / (n - 1.0));
  }
  return s;
}

namespace {

// Everything a cell needs for one (advice, gamma) pair.
struct Prepared {
  std::optional<SwitchPlan> plan;
  std::optional<ProtectionLevels> pl_levels;
};

Prepared prepare(const FareLadder& ladder, const Advice& advice, double gamma,
                 const std::vector<PolicyKind>& policies, double epsilon) {
  Prepared p;
  for (PolicyKind k : policies) {
    if (k == PolicyKind::LpOptimal && !p.plan)
      p.plan = derive_switch_plan(optimal_consistency(ladder, advice, gamma));
    if (k == PolicyKind::OptimalProtection && !p.pl_levels)
      p.pl_levels = optimal_protection_levels(ladder, advice, gamma, epsilon).levels;
  }
  return p;
}

struct Sample {
  Instance instance;
  double opt = 0.0;
  int distance = 0;
};

struct Stability {
  long long checks = 0;
  long long violations = 0;
  double max_excess = -1e300;

  void check(const FareLadder& ladder, const Advice& advice, std::span<const double> levels,
             const std::vector<Sample>& samples) {
    const double base = protection_revenue(ladder, levels, advice_instance(ladder, advice)) /
                        advice_opt(ladder, advice);
    const double k = 2.0 * ladder.top_fare() / ladder.fare(0);
    for (const Sample& s : samples) {
      const double lhs = base - protection_revenue(ladder, levels, s.instance) / s.opt;
      const double excess = lhs - k * s.distance;
      ++checks;
      if (excess > 1e-9) ++violations;
      max_excess = std::max(max_excess, excess);
    }
  }
};

std::vector<Sample> draw(const FareLadder& ladder, const Advice& advice, const NoiseConfig& noise,
                         unsigned threads) {
  std::vector<Sample> out(static_cast<std::size_t>(noise.trials));
  parallel_for(out.size(), threads, [&](std::size_t t) {
    Sample& s = out[t];
    s.instance = sample_instance(ladder, advice, noise, t);
    s.opt = opt_revenue(ladder, s.instance);
    s.distance = advice_distance(ladder, s.instance, advice);
  });
  return out;
}

CrStats evaluate(const FareLadder& ladder, const Advice& advice, double gamma, PolicyKind policy,
                 const Prepared& prep, const std::vector<Sample>& samples, unsigned threads) {
  std::vector<double> ratios(samples.size());
  const ProtectionLevels bq = bq_levels(ladder);
  parallel_for(samples.size(), threads, [&](std::size_t t) {
    const Sample& s = samples[t];
    double revenue = 0.0;
    switch (policy) {
      case PolicyKind::LpOptimal:
        revenue = run_lp_optimal(ladder, advice, gamma, s.instance, *prep.plan).revenue;
        break;
      case PolicyKind::OptimalProtection:
        revenue = protection_revenue(ladder, prep.pl_levels->values(), s.instance);
        break;
      case PolicyKind::BallQueyranne:
        revenue = protection_revenue(ladder, bq.values(), s.instance);
        break;
    }
    ratios[t] = revenue / s.opt;
  });
  return summarize(ratios);
}

}  // namespace

CrStats average_cr(const FareLadder& ladder, const Advice& advice, PolicyKind policy, double gamma,
                   const NoiseConfig& noise, double epsilon, unsigned threads) {
  check_noise(noise);
  check_gamma(ladder, gamma);
  const Prepared prep = prepare(ladder, advice, gamma, {policy}, epsilon);
  const auto samples = draw(ladder, advice, noise, threads);
  return evaluate(ladder, advice, gamma, policy, prep, samples, threads);
}

SweepResult robustness_sweep(const FareLadder& ladder, const SweepSpec& spec, unsigned threads) {
  if (spec.advice.empty() || spec.gammas.empty() || spec.v_values.empty() || spec.policies.empty())
    throw std::invalid_argument("robustness sweep needs advice, gamma, v and policy values");
  for (double g : spec.gammas) check_gamma(ladder, g);
  for (double v : spec.v_values) check_noise(NoiseConfig{v, spec.trials, spec.seed});
  for (const Advice& a : spec.advice)
    if (a.size() != ladder.size())
      throw std::invalid_argument("advice and ladder disagree on the number of classes");

  const std::size_t na = spec.advice.size();
  const std::size_t ng = spec.gammas.size();
  const std::size_t nv = spec.v_values.size();
  const std::size_t np = spec.policies.size();

  std::vector<Prepared> prepared(na * ng);
  parallel_for(prepared.size(), threads, [&](std::size_t idx) {
    prepared[idx] = prepare(ladder, spec.advice[idx / ng], spec.gammas[idx % ng], spec.policies,
                            spec.epsilon);
  });

  SweepResult result;
  result.rows.resize(na * nv * ng * np);
  std::vector<Stability> stability(na * nv);
  parallel_for(na * nv, threads, [&](std::size_t cell) {
    const std::size_t a = cell / nv;
    const std::size_t j = cell % nv;
    const Advice& advice = spec.advice[a];
    const NoiseConfig noise{spec.v_values[j], spec.trials, cell_seed(spec.seed, cell)};
    const auto samples = draw(ladder, advice, noise, 1);
    stability[cell].check(ladder, advice, bq_levels(ladder).values(), samples);
    for (std::size_t g = 0; g < ng; ++g) {
      const Prepared& prep = prepared[a * ng + g];
      if (prep.pl_levels) stability[cell].check(ladder, advice, prep.pl_levels->values(), samples);
      for (std::size_t p = 0; p < np; ++p) {
        SweepRow& row = result.rows[((cell * ng) + g) * np + p];
        row.advice_index = a;
        row.advice.assign(advice.counts().begin(), advice.counts().end());
        row.v = spec.v_values[j];
        row.gamma = spec.gammas[g];
        row.policy = spec.policies[p];
        row.stats = evaluate(ladder, advice, row.gamma, row.policy, prep, samples, 1);
      }
    }
  });
  for (const Stability& s : stability) {
    result.stability_checks += s.checks;
    result.stability_violations += s.violations;
    result.stability_max_excess = std::max(result.stability_max_excess, s.max_excess);
  }
  return result;
}

}  // namespace rmadvice
