// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "rmadvice/experiment.hpp"
#include "rmadvice/frontier.hpp"
#include "rmadvice/parallel.hpp"
#include "rmadvice/pareto_lp.hpp"
#include "rmadvice/policy.hpp"
#include "rmadvice/protection_optimizer.hpp"
#include "support/oracles.hpp"
#include "support/random_lp.hpp"

using namespace rmadvice;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

int failures = 0;
unsigned threads = std::max(1u, std::thread::hardware_concurrency());

template <class Fn>
void criterion(int id, const char* name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  std::string note;
  try {
    note = fn(v);
  } catch (const std::exception& e) {
    v.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("[%s] AC%d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", id, name, secs,
              v.pass ? note.c_str() : (v.detail.str() + (note.empty() ? "" : " | " + note)).c_str());
  std::fflush(stdout);
}

std::string fmt(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

struct Config {
  std::vector<double> fares;
  int n;
  std::vector<int> counts;
  double gamma;
};

// Example ladders plus random ones.
std::vector<Config> guarantee_configs(std::mt19937_64& rng, int random_count) {
  std::vector<Config> out{
      {{100, 200, 400, 800}, 100, {10, 20, 60, 10}, 0.3},
      {{100, 200, 400, 800}, 100, {10, 20, 60, 10}, 0.4},
      {{1, 2, 4}, 100, {70, 20, 10}, 0.4},
      {{1, 2, 4}, 100, {15, 70, 15}, 0.25},
      {{1, 2, 4}, 100, {10, 20, 70}, 0.0},
      {{1, 1000, 1e6}, 90, {1, 30, 59}, 1.0 / 3.0},
      {{1, 2}, 2, {0, 2}, 2.0 / 3.0},
  };
  for (int i = 0; i < random_count; ++i) {
    const std::size_t m = 1 + rng() % 4;
    const int n = 1 + static_cast<int>(rng() % 30);
    auto fares = oracle::random_fares(rng, m);
    const double c = bq_bound(FareLadder(fares, n));
    out.push_back({fares, n, oracle::random_advice(rng, m, n), c * (rng() % 5) / 4.0});
  }
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance run, %u threads\n", threads);

  criterion(1, "baseline constants", [](Verdict& v) {
    const double a = bq_bound(make_fare_ladder({100, 200, 400, 800}, 100));
    const double b = bq_bound(make_fare_ladder({1, 2, 4}, 100));
    const double c = bq_bound(make_fare_ladder({1, 10, 100}, 100));
    v.expect(std::abs(a - 0.4) <= 1e-12, "c({100,200,400,800}) = " + fmt(a, 17));
    v.expect(std::abs(b - 0.5) <= 1e-12, "c({1,2,4}) = " + fmt(b, 17));
    v.expect(std::abs(c - 0.3571428571) <= 1e-9, "c({1,10,100}) = " + fmt(c, 17));
    return "c = " + fmt(a) + ", " + fmt(b) + ", " + fmt(c);
  });

  criterion(2, "tiny exact case", [](Verdict& v) {
    const auto F = make_fare_ladder({1, 2}, 2);
    const Advice A(F, {0, 2});
    const double lp = optimal_consistency(F, A, 2.0 / 3.0).beta_star;
    const double pl = protection_consistency(F, A, 2.0 / 3.0, 1e-6);
    v.expect(std::abs(lp - 2.0 / 3.0) <= 1e-6, "beta = " + fmt(lp, 17));
    v.expect(std::abs(pl - 2.0 / 3.0) <= 2e-6, "beta_pl = " + fmt(pl, 17));
    return "beta = " + fmt(lp, 12) + ", beta_pl = " + fmt(pl, 12);
  });

  criterion(3, "Example 2 gap", [](Verdict& v) {
    const double eta = 1000;
    const std::vector<double> fares{1, eta, eta * eta};
    const std::vector<int> counts{1, 30, 59};
    const auto F = make_fare_ladder(fares, 90);
    const Advice A(F, counts);
    const double gamma = 1.0 / 3.0;
    const double point_beta = (30 + 10 * eta + 50 * eta * eta) / (1 + 30 * eta + 59 * eta * eta);
    const double viol = oracle::lp1_violation(fares, 90, counts, gamma, point_beta, {30, 10, 50},
                                              {{0, 30, 30}, {0, 20, 30}, {0, 0, 0}});
    v.expect(viol <= 1e-9, "published point violates a row by " + fmt(viol));
    const LpSolution s = optimal_consistency(F, A, gamma);
    v.expect(s.optimal(), "LP not optimal");
    v.expect(s.beta_star >= 0.847 - 1e-6, "beta* = " + fmt(s.beta_star));
    v.expect(s.beta_star >= point_beta - 1e-9, "beta* below the published point");
    const double pl = protection_consistency(F, A, gamma);
    v.expect(pl <= 0.54, "beta_pl = " + fmt(pl));
    const double rs = relative_suboptimality(consistency_frontier(F, A, {gamma}));
    v.expect(rs >= 0.25, "RS = " + fmt(rs));
    return "point violation " + fmt(viol, 3) + ", point beta " + fmt(point_beta) + ", beta* " +
           fmt(s.beta_star) + ", beta_pl " + fmt(pl) + ", RS " + fmt(rs);
  });

  criterion(4, "Figure 1 frontier", [](Verdict& v) {
    const auto F = make_fare_ladder({100, 200, 400, 800}, 100);
    const Advice A(F, {10, 20, 60, 10});
    const auto grid = default_gamma_grid(F, 41);
    const FrontierCurve c = consistency_frontier(F, A, grid, 1e-6, threads);
    v.expect(std::abs(c.beta_lp[0] - 1) <= 1e-6, "beta(A, 0) = " + fmt(c.beta_lp[0]));
    int bad_order = 0, bad_mono = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(c.beta_lp[i] >= c.beta_pl[i] - c.epsilon)) ++bad_order;
      if (!(c.beta_pl[i] - c.epsilon >= c.bq_consistency - c.epsilon)) ++bad_order;
      if (i > 0 && (c.beta_lp[i] > c.beta_lp[i - 1] + 1e-9 || c.beta_pl[i] > c.beta_pl[i - 1] + 1e-9))
        ++bad_mono;
    }
    v.expect(bad_order == 0, std::to_string(bad_order) + " ordering violations");
    v.expect(bad_mono == 0, std::to_string(bad_mono) + " monotonicity violations");
    return "41 points, beta_lp " + fmt(c.beta_lp.front(), 6) + " -> " + fmt(c.beta_lp.back(), 6) +
           ", beta_pl " + fmt(c.beta_pl.front(), 6) + " -> " + fmt(c.beta_pl.back(), 6) +
           ", bq " + fmt(c.bq_consistency, 6);
  });

  criterion(5, "RS grid", [](Verdict& v) {
    const auto F = make_fare_ladder({1, 2, 4}, 100);
    const auto grid = advice_grid(F, 10);
    const auto gammas = default_gamma_grid(F, 41);
    std::vector<double> rs(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
      rs[i] = relative_suboptimality(consistency_frontier(F, grid[i], gammas));
    });
    const double max_rs = *std::max_element(rs.begin(), rs.end());
    const auto small = std::count_if(rs.begin(), rs.end(), [](double r) { return r < 0.01; });
    v.expect(grid.size() == 66, std::to_string(grid.size()) + " advice points");
    v.expect(max_rs < 1.0 / 3.0, "max RS = " + fmt(max_rs));
    v.expect(2 * small > static_cast<long>(grid.size()), std::to_string(small) + " points below 0.01");
    return std::to_string(grid.size()) + " points, max RS " + fmt(max_rs, 6) + ", " +
           std::to_string(small) + " below 0.01";
  });

  criterion(6, "worst-case guarantees", [](Verdict& v) {
    std::mt19937_64 rng(6006);
    const auto configs = guarantee_configs(rng, 13);
    const int per_config = 1000 / static_cast<int>(configs.size()) + 1;
    long lp_runs = 0, pl_runs = 0, hard_runs = 0, perms = 0;
    int lp_bad = 0, pl_bad = 0, perm_bad = 0, pl_cons_bad = 0;
    for (const Config& cfg : configs) {
      const FareLadder F(cfg.fares, cfg.n);
      const Advice A(F, cfg.counts);
      const std::size_t m = cfg.fares.size();
      const LpSolution s = optimal_consistency(F, A, cfg.gamma);
      const SwitchPlan plan = derive_switch_plan(s);
      const ProtectionResult pr = optimal_protection_levels(F, A, cfg.gamma);
      const double opt_a = advice_opt(F, A);

      std::vector<Instance> pool = hard_instances(F, A);
      hard_runs += static_cast<long>(pool.size());
      for (int r = 0; r < per_config; ++r)
        pool.emplace_back(oracle::random_steps(rng, m, rng() % (3 * cfg.n + 2)));
      for (const Instance& I : pool) {
        const double opt = opt_revenue(F, I);
        if (run_lp_optimal(F, A, cfg.gamma, I, plan).revenue < cfg.gamma * opt - 1e-9 * std::max(1.0, opt))
          ++lp_bad;
        if (run_protection_policy(F, pr.levels, I).revenue <
            (cfg.gamma - pr.epsilon - 1e-9) * opt)
          ++pl_bad;
        ++lp_runs;
        ++pl_runs;
      }
      const Instance ia = advice_instance(F, A);
      if (run_protection_policy(F, pr.levels, ia).revenue < pr.beta_lower * opt_a - 1e-9 * opt_a)
        ++pl_cons_bad;
      std::vector<int> steps(ia.begin(), ia.end());
      for (int p = 0; p < 200; ++p) {
        std::shuffle(steps.begin(), steps.end(), rng);
        if (run_lp_optimal(F, A, cfg.gamma, Instance(steps), plan).revenue <
            s.beta_star * opt_a - 1e-6 * opt_a)
          ++perm_bad;
        ++perms;
      }
    }
    v.expect(lp_bad == 0, std::to_string(lp_bad) + " switching-policy competitiveness failures");
    v.expect(pl_bad == 0, std::to_string(pl_bad) + " protection-level competitiveness failures");
    v.expect(perm_bad == 0, std::to_string(perm_bad) + " permutation consistency failures");
    v.expect(pl_cons_bad == 0, std::to_string(pl_cons_bad) + " protection-level consistency failures");
    return std::to_string(configs.size()) + " (A, gamma) cases, " + std::to_string(lp_runs) +
           " instances per policy (" + std::to_string(hard_runs) + " hard), " + std::to_string(perms) +
           " permutations of I(A)";
  });

  criterion(7, "relaxed guarantees", [](Verdict& v) {
    std::mt19937_64 rng(7007);
    const auto configs = guarantee_configs(rng, 18);
    const int per_config = 500 / static_cast<int>(configs.size()) + 1;
    long near = 0, any = 0;
    int near_bad = 0, any_bad = 0, not_member = 0;
    double worst = 1e300;
    for (const Config& cfg : configs) {
      const FareLadder F(cfg.fares, cfg.n);
      const Advice A(F, cfg.counts);
      const double eps = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
      const LpSolution s = optimal_consistency(F, A, cfg.gamma);
      const SwitchPlan plan = derive_switch_plan(s);
      for (int r = 0; r < per_config; ++r) {
        const double mu = std::uniform_real_distribution<double>(0.0, eps)(rng);
        const double nu = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
        const Instance I(oracle::near_conforming_steps(rng, cfg.counts, cfg.n, mu, nu));
        if (!conforms_relaxed(A, I, {mu, nu})) ++not_member;
        const double opt = opt_revenue(F, I);
        const double rev = run_relaxed_optimal(F, A, cfg.gamma, eps, I, plan).revenue;
        const double bound = s.beta_star / ((1 + mu) * (1 + nu)) * opt;
        worst = std::min(worst, (rev - bound) / opt);
        if (rev < bound - 1e-7 * opt) ++near_bad;
        ++near;

        const Instance J(oracle::random_steps(rng, cfg.fares.size(), rng() % (3 * cfg.n + 2)));
        const double opt_j = opt_revenue(F, J);
        if (run_relaxed_optimal(F, A, cfg.gamma, eps, J, plan).revenue <
            cfg.gamma / (1 + eps) * opt_j - 1e-9 * std::max(1.0, opt_j))
          ++any_bad;
        ++any;
      }
    }
    v.expect(not_member == 0, std::to_string(not_member) + " generated instances outside S(A, mu, nu)");
    v.expect(near_bad == 0, std::to_string(near_bad) + " near-conforming failures");
    v.expect(any_bad == 0, std::to_string(any_bad) + " arbitrary-instance failures");
    return std::to_string(near) + " near-conforming and " + std::to_string(any) +
           " arbitrary instances, min relative slack " + fmt(worst, 3);
  });

  criterion(8, "lemma properties", [](Verdict& v) {
    std::mt19937_64 rng(8008);
    int dom_bad = 0, id_bad = 0;
    double worst_id = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t m = 1 + rng() % 5;
      const int n = 1 + static_cast<int>(rng() % 20);
      const auto fares = oracle::random_fares(rng, m);
      const FareLadder F(fares, n);
      std::vector<double> q(m);
      std::uniform_real_distribution<double> u(0.0, n);
      for (double& x : q) x = u(rng);
      std::sort(q.begin(), q.end());
      auto steps = oracle::random_steps(rng, m, rng() % (3 * n + 1));
      const double any = protection_revenue(F, q, Instance(steps));
      std::sort(steps.begin(), steps.end());
      const double inc = oracle::nested_cap_revenue(fares, q, steps);
      if (inc > any + 1e-9 * std::max(1.0, any)) ++dom_bad;
    }
    for (int t = 0; t < 1000; ++t) {
      const std::size_t m = 1 + rng() % 6;
      const auto f = oracle::random_fares(rng, m);
      std::vector<double> x(m);
      std::uniform_real_distribution<double> u(0.0, 10.0);
      for (double& e : x) e = u(rng);
      const std::size_t k = 1 + rng() % m;
      double lhs = 0.0, rhs = 0.0, qk = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        lhs += f[j] * x[j];
        qk += x[j];
      }
      double q_before = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        rhs += (qk - q_before) * (f[p] - (p ? f[p - 1] : 0.0));
        q_before += x[p];
      }
      const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
      worst_id = std::max(worst_id, rel);
      if (rel > 1e-9) ++id_bad;
    }
    v.expect(dom_bad == 0, std::to_string(dom_bad) + " increasing-order dominance failures");
    v.expect(id_bad == 0, std::to_string(id_bad) + " rev-rewrite failures");
    return "1000 (Q, I) draws, 1000 (x, k) draws, max identity error " + fmt(worst_id, 3);
  });

  const auto F3 = make_fare_ladder({1, 2, 4}, 100);
  SweepSpec fig4;
  fig4.advice = {Advice(F3, {70, 20, 10}), Advice(F3, {15, 70, 15}), Advice(F3, {10, 20, 70})};
  for (int i = 0; i <= 10; ++i) fig4.gammas.push_back(0.05 * i);
  fig4.gammas.back() = 0.5;
  fig4.v_values = {0.5};
  fig4.trials = 1000;
  fig4.seed = 2024;
  SweepSpec fig5 = fig4;
  fig5.gammas = {0.4};
  fig5.v_values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

  SweepResult r4, r5;
  double sweep_secs = 0.0;
  std::string sweep_error;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r4 = robustness_sweep(F3, fig4, threads);
      r5 = robustness_sweep(F3, fig5, threads);
    } catch (const std::exception& e) {
      sweep_error = e.what();
    }
    sweep_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  criterion(9, "stability inequality in sweeps", [&](Verdict& v) {
    v.expect(sweep_error.empty(), "sweep failed: " + sweep_error);
    const long long checks = r4.stability_checks + r5.stability_checks;
    const long long bad = r4.stability_violations + r5.stability_violations;
    v.expect(checks > 0, "no triples checked");
    v.expect(bad == 0, std::to_string(bad) + " violations");
    return std::to_string(checks) + " (I, A, Q) triples, max lhs - rhs " +
           fmt(std::max(r4.stability_max_excess, r5.stability_max_excess), 4);
  });

  criterion(10, "robustness sweeps", [&](Verdict& v) {
    v.expect(sweep_error.empty(), "sweep failed: " + sweep_error);
    // (a) v = 0.5: LP and PL means at least the BQ mean at every gamma
    int dominance_bad = 0;
    double worst_gap = 1e300;
    for (std::size_t i = 0; i + 2 < r4.rows.size(); i += 3) {
      const SweepRow &lp = r4.rows[i], &pl = r4.rows[i + 1], &bq = r4.rows[i + 2];
      worst_gap = std::min({worst_gap, lp.stats.mean - bq.stats.mean, pl.stats.mean - bq.stats.mean});
      for (const SweepRow* row : {&lp, &pl}) {
        if (row->stats.mean < bq.stats.mean - 1e-9) {
          ++dominance_bad;
          std::ostringstream os;
          os << to_string(row->policy) << " below bq at A=" << row->advice[0] << "-" << row->advice[1]
             << "-" << row->advice[2] << " gamma=" << row->gamma << " (" << fmt(row->stats.mean, 6)
             << " < " << fmt(bq.stats.mean, 6) << ")";
          v.expect(false, os.str());
        }
      }
    }
    // (b) gamma = 0.4: mean nonincreasing in v within 2 standard errors
    const std::size_t np = fig5.policies.size(), nv = fig5.v_values.size();
    int mono_bad = 0, mono_checked = 0;
    for (std::size_t a = 0; a < fig5.advice.size(); ++a)
      for (std::size_t p = 0; p < np; ++p)
        for (std::size_t j = 0; j + 1 < nv; ++j) {
          const SweepRow& cur = r5.rows[(a * nv + j) * np + p];
          const SweepRow& nxt = r5.rows[(a * nv + j + 1) * np + p];
          const double se = std::sqrt(cur.stats.std * cur.stats.std / cur.stats.trials +
                                      nxt.stats.std * nxt.stats.std / nxt.stats.trials);
          ++mono_checked;
          if (nxt.stats.mean > cur.stats.mean + 2 * se) {
            ++mono_bad;
            std::ostringstream os;
            os << to_string(cur.policy) << " rises at A=" << cur.advice[0] << "-" << cur.advice[1] << "-"
               << cur.advice[2] << " v=" << cur.v << "->" << nxt.v << " (" << fmt(cur.stats.mean, 5)
               << " -> " << fmt(nxt.stats.mean, 5) << ", 2se=" << fmt(2 * se, 2) << ")";
            v.expect(false, os.str());
          }
        }
    std::ostringstream note;
    note << r4.rows.size() << " + " << r5.rows.size() << " rows, " << fig4.trials
         << " trials per cell, sweeps " << fmt(sweep_secs, 3) << "s; min (policy - bq) mean gap "
         << fmt(worst_gap, 3) << ", dominance failures " << dominance_bad << ", v-monotonicity "
         << mono_bad << "/" << mono_checked << " steps rising";
    return note.str();
  });

  criterion(11, "LP solver oracle", [](Verdict& v) {
    std::mt19937_64 rng(1111);
    int matched = 0, bad = 0, infeasible = 0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t vars = 1 + rng() % 4, rows = rng() % 7;
      auto [lp, ref] = oracle::random_lp(rng, vars, rows);
      const LpResult r = solve_lp(lp);
      const auto best = oracle::vertex_enumeration(ref);
      if (!best) {
        if (r.status == LpStatus::Infeasible) ++infeasible;
        else ++bad;
        continue;
      }
      const double err = r.status == LpStatus::Optimal ? std::abs(r.objective - *best) : 1e300;
      worst = std::max(worst, err);
      if (err <= 1e-8) ++matched;
      else ++bad;
    }
    v.expect(bad == 0, std::to_string(bad) + " mismatches");
    return std::to_string(matched) + " optima matched, " + std::to_string(infeasible) +
           " infeasible agreed, max error " + fmt(worst, 3);
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
