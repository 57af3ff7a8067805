#pragma once

// Dense two-phase primal simplex for small linear programs.
//
// The model is
//
//   maximize    c^T x
//   subject to  a_r^T x  (<=, >=, =)  b_r      for every row r
//               lower <= x <= upper
//
// Lower bounds must be finite; upper bounds may be +infinity. Each row is
// scaled by its largest |coefficient| before pivoting, and entering/leaving
// choices follow Bland's rule so degenerate LPs cannot cycle.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rmadvice {

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LpRow {
  std::vector<double> coeffs;  // dense, one entry per variable
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
  std::string label;
};

struct LpModel {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> labels;

  std::size_t num_vars() const { return objective.size(); }

  /// Appends a variable and returns its column.
  std::size_t add_variable(std::string label, double lo = 0.0,
                           double hi = std::numeric_limits<double>::infinity(),
                           double cost = 0.0);
  LpRow& add_row(RowSense sense, double rhs, std::string label = {});
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpTolerances {
  double feasibility = 1e-9;  // row-normalized
  double optimality = 1e-9;   // reduced cost
  double pivot = 1e-11;
  int max_iterations = 50000;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
  /// Largest row-normalized constraint violation of `values` (incl. bounds).
  double max_violation = 0.0;
  int iterations = 0;
};

LpResult solve_lp(const LpModel& model, const LpTolerances& tol = {});

/// Largest violation of the model's rows and bounds at `x`, each row divided
/// by its largest |coefficient|.
double max_row_violation(const LpModel& model, const std::vector<double>& x);

/// Plain-text dump: one line per row, `sense rhs j:coef j:coef ...`, after a
/// header listing variables in column order.
void write_lp_model(std::ostream& os, const LpModel& model);

}  // namespace rmadvice
