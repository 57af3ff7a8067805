#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "rmadvice/simplex.hpp"
#include "support/oracles.hpp"
#include "support/random_lp.hpp"

using namespace rmadvice;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("single bounded variable") {
  LpModel lp;
  lp.add_variable("beta", 0.0, 1.0, 1.0);
  lp.add_row(RowSense::LessEqual, 0.7).coeffs[0] = 1.0;
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.values[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("textbook two-variable LP") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  LpModel lp;
  lp.add_variable("x", 0, kInf, 3);
  lp.add_variable("y", 0, kInf, 5);
  lp.add_row(RowSense::LessEqual, 4).coeffs = {1, 0};
  lp.add_row(RowSense::LessEqual, 12).coeffs = {0, 2};
  lp.add_row(RowSense::LessEqual, 18).coeffs = {3, 2};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(36));
  CHECK(r.values[0] == doctest::Approx(2));
  CHECK(r.values[1] == doctest::Approx(6));
  CHECK(r.max_violation <= 1e-9);
}

TEST_CASE("infeasible and unbounded are reported distinctly") {
  LpModel inf;
  inf.add_variable("x", 0, kInf, 1);
  inf.add_row(RowSense::GreaterEqual, 5).coeffs[0] = 1;
  inf.add_row(RowSense::LessEqual, 3).coeffs[0] = 1;
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  LpModel unb;
  unb.add_variable("x", 0, kInf, 1);
  unb.add_variable("y", 0, kInf, 0);
  unb.add_row(RowSense::LessEqual, 1).coeffs = {1, -1};
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);

  LpModel box;
  box.add_variable("x", 2, 1, 1);
  CHECK(solve_lp(box).status == LpStatus::Infeasible);
}

TEST_CASE("equality rows, negative lower bounds and degenerate vertices") {
  // max x + y, x + y = 2, x - y <= 0, x >= -1, x + 2y <= 4, 2x + 4y <= 8 (duplicate)
  LpModel lp;
  lp.add_variable("x", -1, kInf, 1);
  lp.add_variable("y", 0, kInf, 1);
  lp.add_row(RowSense::Equal, 2).coeffs = {1, 1};
  lp.add_row(RowSense::LessEqual, 0).coeffs = {1, -1};
  lp.add_row(RowSense::LessEqual, 4).coeffs = {1, 2};
  lp.add_row(RowSense::LessEqual, 8).coeffs = {2, 4};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2));
  CHECK(r.values[0] + r.values[1] == doctest::Approx(2));
  CHECK(r.values[0] <= r.values[1] + 1e-9);
}

TEST_CASE("redundant equalities leave no artificial in the basis") {
  LpModel lp;
  lp.add_variable("x", 0, kInf, 1);
  lp.add_variable("y", 0, kInf, 2);
  lp.add_row(RowSense::Equal, 3).coeffs = {1, 1};
  lp.add_row(RowSense::Equal, 6).coeffs = {2, 2};
  lp.add_row(RowSense::LessEqual, 2).coeffs = {0, 1};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(5));
}

TEST_CASE("row scaling copes with wide coefficient ranges") {
  LpModel lp;
  lp.add_variable("x", 0, 1e3, 1e-6);
  lp.add_variable("y", 0, kInf, 1.0);
  lp.add_row(RowSense::LessEqual, 2e6).coeffs = {1e6, 1e6};
  lp.add_row(RowSense::LessEqual, 1.5e-6).coeffs = {0, 1e-6};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.values[1] == doctest::Approx(1.5));
  CHECK(r.values[0] == doctest::Approx(0.5));
}

TEST_CASE("random small LPs match vertex enumeration") {
  std::mt19937_64 rng(77);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t vars = 1 + rng() % 4;
    const std::size_t rows = rng() % 7;
    auto [lp, ref] = oracle::random_lp(rng, vars, rows);
    const LpResult r = solve_lp(lp);
    const auto best = oracle::vertex_enumeration(ref);
    if (!best) {
      CHECK(r.status == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(std::abs(r.objective - *best) <= 1e-8 * std::max(1.0, std::abs(*best)));
    CHECK(max_row_violation(lp, r.values) <= 1e-9);
    ++optimal;
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 10);
}

TEST_CASE("violation measure and text dump") {
  LpModel lp;
  lp.add_variable("a", 0, 1, 1);
  lp.add_variable("b", 0, kInf, 0);
  auto& row = lp.add_row(RowSense::LessEqual, 1, "sum");
  row.coeffs = {2, 2};
  CHECK(max_row_violation(lp, {1, 1}) == doctest::Approx(1.5));
  CHECK(max_row_violation(lp, {0.25, 0.25}) == 0.0);
  CHECK(max_row_violation(lp, {2, 0}) > 0.0);

  std::ostringstream os;
  write_lp_model(os, lp);
  const std::string s = os.str();
  CHECK(s.find("sum") != std::string::npos);
  CHECK(s.find("<=") != std::string::npos);
}
