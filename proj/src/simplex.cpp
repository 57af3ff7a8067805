#include "rmadvice/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rmadvice {

std::size_t LpModel::add_variable(std::string label, double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  labels.push_back(std::move(label));
  for (auto& row : rows) row.coeffs.push_back(0.0);
  return objective.size() - 1;
}

LpRow& LpModel::add_row(RowSense sense, double rhs, std::string label) {
  rows.push_back(LpRow{std::vector<double>(num_vars(), 0.0), sense, rhs, std::move(label)});
  return rows.back();
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kTieTol = 1e-12;

double row_scale(const std::vector<double>& coeffs) {
  double s = 0.0;
  for (double a : coeffs) s = std::max(s, std::abs(a));
  return s;
}

// Tableau in the usual layout: `rows_` constraint rows over `cols_` columns
// plus a right-hand side, with the objective row kept separately as reduced
// costs d_j (maximization: a column may enter while d_j > tol).
class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0), d_(cols + 1, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // Loads objective coefficients (maximize) and prices out the basis.
  void set_objective(const std::vector<double>& cost) {
    std::fill(d_.begin(), d_.end(), 0.0);
    for (std::size_t j = 0; j < cols_; ++j) d_[j] = cost[j];
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) d_[j] -= cb * at(r, j);
    }
  }
  // Current objective value: -d_[rhs].
  double objective() const { return -d_[cols_]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j <= cols_; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(r, j) -= f * at(pr, j);
      at(r, pc) = 0.0;
    }
    const double f = d_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) d_[j] -= f * at(pr, j);
      d_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Bland's rule primal simplex over columns with allowed[j] set.
  LpStatus run(const std::vector<char>& allowed, const LpTolerances& tol, int& iterations) {
    while (true) {
      if (iterations >= tol.max_iterations) return LpStatus::IterationLimit;
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && d_[j] > tol.optimality) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpStatus::Optimal;

      // Minimum ratio; ties go to the smallest basic column (Bland).
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= tol.pivot) continue;
        const double ratio = std::max(0.0, rhs(r)) / a;
        if (leave == rows_ || ratio < best - kTieTol) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + kTieTol && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave == rows_) return LpStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<double> d_;
};

}  // namespace

double max_row_violation(const LpModel& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& row : model.rows) {
    const double s = row_scale(row.coeffs);
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    const double scale = s > 0.0 ? s : 1.0;
    double v = 0.0;
    switch (row.sense) {
      case RowSense::LessEqual: v = lhs - row.rhs; break;
      case RowSense::GreaterEqual: v = row.rhs - lhs; break;
      case RowSense::Equal: v = std::abs(lhs - row.rhs); break;
    }
    worst = std::max(worst, v / scale);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, model.lower[j] - x[j]);
    if (std::isfinite(model.upper[j])) worst = std::max(worst, x[j] - model.upper[j]);
  }
  return worst;
}

LpResult solve_lp(const LpModel& model, const LpTolerances& tol) {
  const std::size_t n = model.num_vars();
  if (model.lower.size() != n || model.upper.size() != n)
    throw std::invalid_argument("bound vectors must match the variable count");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(model.lower[j]))
      throw std::invalid_argument("lower bounds must be finite");
    if (model.upper[j] < model.lower[j]) {
      LpResult r;
      r.status = LpStatus::Infeasible;
      return r;
    }
  }

  // Shift x = lower + z, then collect every constraint (rows and finite
  // upper bounds) as scaled rows with a nonnegative right-hand side.
  struct StdRow {
    std::vector<double> a;
    RowSense sense;
    double b;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(model.rows.size() + n);
  for (const auto& row : model.rows) {
    if (row.coeffs.size() != n) throw std::invalid_argument("row width mismatch");
    StdRow r{row.coeffs, row.sense, row.rhs};
    for (std::size_t j = 0; j < n; ++j) r.b -= r.a[j] * model.lower[j];
    const double s = row_scale(r.a);
    if (s == 0.0) {
      const bool ok = (r.sense == RowSense::LessEqual && r.b >= -tol.feasibility) ||
                      (r.sense == RowSense::GreaterEqual && r.b <= tol.feasibility) ||
                      (r.sense == RowSense::Equal && std::abs(r.b) <= tol.feasibility);
      if (!ok) return LpResult{LpStatus::Infeasible, 0.0, {}, 0.0, 0};
      continue;
    }
    for (double& a : r.a) a /= s;
    r.b /= s;
    std_rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(model.upper[j])) continue;
    StdRow r{std::vector<double>(n, 0.0), RowSense::LessEqual, model.upper[j] - model.lower[j]};
    r.a[j] = 1.0;
    std_rows.push_back(std::move(r));
  }
  for (auto& r : std_rows) {
    if (r.b < 0.0) {
      for (double& a : r.a) a = -a;
      r.b = -r.b;
      if (r.sense == RowSense::LessEqual) r.sense = RowSense::GreaterEqual;
      else if (r.sense == RowSense::GreaterEqual) r.sense = RowSense::LessEqual;
    }
  }

  // Columns: structural | slack/surplus | artificial.
  const std::size_t m = std_rows.size();
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : std_rows) {
    if (r.sense != RowSense::Equal) ++n_slack;
    if (r.sense != RowSense::LessEqual) ++n_art;
  }
  const std::size_t art_begin = n + n_slack;
  const std::size_t cols = art_begin + n_art;
  Tableau t(m, cols);
  std::size_t next_slack = n, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = std_rows[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = r.a[j];
    t.rhs(i) = r.b;
    switch (r.sense) {
      case RowSense::LessEqual:
        t.at(i, next_slack) = 1.0;
        t.basis()[i] = next_slack++;
        break;
      case RowSense::GreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        t.basis()[i] = next_art++;
        break;
      case RowSense::Equal:
        t.at(i, next_art) = 1.0;
        t.basis()[i] = next_art++;
        break;
    }
  }

  LpResult result;
  int iterations = 0;
  std::vector<char> allowed(cols, 1);

  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = art_begin; j < cols; ++j) phase1[j] = -1.0;
    t.set_objective(phase1);
    const LpStatus st = t.run(allowed, tol, iterations);
    if (st == LpStatus::IterationLimit) {
      result.status = st;
      result.iterations = iterations;
      return result;
    }
    if (t.objective() < -tol.feasibility * std::max<double>(1.0, static_cast<double>(m))) {
      result.status = LpStatus::Infeasible;
      result.iterations = iterations;
      return result;
    }
    // Drive artificials out of the basis where possible; rows where that
    // fails are redundant and keep a zero-valued artificial.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] < art_begin) continue;
      std::size_t best = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j)
        if (std::abs(t.at(r, j)) > 1e-9 &&
            (best == art_begin || std::abs(t.at(r, j)) > std::abs(t.at(r, best))))
          best = j;
      if (best != art_begin) t.pivot(r, best);
    }
    for (std::size_t j = art_begin; j < cols; ++j) allowed[j] = 0;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = model.objective[j];
  t.set_objective(cost);
  const LpStatus st = t.run(allowed, tol, iterations);
  result.status = st;
  result.iterations = iterations;
  if (st != LpStatus::Optimal) return result;

  result.values.assign(model.lower.begin(), model.lower.end());
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = t.basis()[r];
    if (b < n) result.values[b] += t.rhs(r);
  }
  // Snap tiny bound excursions left over from elimination round-off.
  for (std::size_t j = 0; j < n; ++j) {
    result.values[j] = std::max(result.values[j], model.lower[j]);
    if (std::isfinite(model.upper[j])) result.values[j] = std::min(result.values[j], model.upper[j]);
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += model.objective[j] * result.values[j];
  result.max_violation = max_row_violation(model, result.values);
  return result;
}

void write_lp_model(std::ostream& os, const LpModel& model) {
  os << "# variables:";
  for (std::size_t j = 0; j < model.num_vars(); ++j) os << ' ' << j << '=' << model.labels[j];
  os << '\n';
  os << "max";
  for (std::size_t j = 0; j < model.num_vars(); ++j)
    if (model.objective[j] != 0.0) os << ' ' << j << ':' << model.objective[j];
  os << '\n';
  for (const auto& row : model.rows) {
    switch (row.sense) {
      case RowSense::LessEqual: os << "<="; break;
      case RowSense::GreaterEqual: os << ">="; break;
      case RowSense::Equal: os << "="; break;
    }
    os << ' ' << row.rhs;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j)
      if (row.coeffs[j] != 0.0) os << ' ' << j << ':' << row.coeffs[j];
    if (!row.label.empty()) os << " # " << row.label;
    os << '\n';
  }
  for (std::size_t j = 0; j < model.num_vars(); ++j)
    os << "bound " << j << ' ' << model.lower[j] << ' ' << model.upper[j] << '\n';
}

}  // namespace rmadvice
