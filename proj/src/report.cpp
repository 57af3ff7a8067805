#include "rmadvice/report.hpp"

#include <charconv>
#include <cmath>
#include <span>
#include <stdexcept>

namespace rmadvice {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

template <class T>
void json_array(std::ostream& out, std::span<const T> xs) {
  out << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ", ";
    if constexpr (std::is_floating_point_v<T>) out << format_number(xs[i]);
    else out << xs[i];
  }
  out << ']';
}

void json_array(std::ostream& out, const std::vector<double>& xs) {
  json_array<double>(out, std::span<const double>(xs));
}

}  // namespace

void write_frontier_csv(std::ostream& out, const FrontierCurve& curve) {
  out << "gamma,beta_lp,beta_pl,bq_consistency\n";
  for (std::size_t i = 0; i < curve.gammas.size(); ++i)
    out << format_number(curve.gammas[i]) << ',' << format_number(curve.beta_lp[i]) << ','
        << format_number(curve.beta_pl[i]) << ',' << format_number(curve.bq_consistency) << '\n';
}

void write_rs_grid_csv(std::ostream& out, const std::vector<Advice>& grid,
                       const std::vector<double>& rs) {
  if (grid.size() != rs.size()) throw std::invalid_argument("grid and rs sizes differ");
  if (grid.empty()) return;
  for (std::size_t i = 0; i < grid[0].size(); ++i) out << "A_" << i + 1 << ',';
  out << "rs\n";
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (int c : grid[r].counts()) out << c << ',';
    out << format_number(rs[r]) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const FareLadder& ladder, const PolicyTrace& trace) {
  out << "step,fare_index,fare_value,accepted_fraction";
  for (std::size_t i = 0; i < ladder.size(); ++i) out << ",q_" << i + 1;
  out << ",delta,revenue_so_far\n";
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto p = static_cast<std::size_t>(trace.steps[t]);
    out << t + 1 << ',' << p + 1 << ',' << format_number(ladder.fare(p)) << ','
        << format_number(trace.accepted[t]);
    for (double q : trace.q_after(t)) out << ',' << format_number(q);
    out << ',' << static_cast<int>(trace.delta_history[t]) << ','
        << format_number(trace.revenue_history[t]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "advice_index,advice,v,gamma,policy,mean_cr,std_cr,min_cr,trials\n";
  for (const SweepRow& row : result.rows) {
    out << row.advice_index + 1 << ',';
    for (std::size_t i = 0; i < row.advice.size(); ++i) out << (i ? "-" : "") << row.advice[i];
    out << ',' << format_number(row.v) << ',' << format_number(row.gamma) << ','
        << to_string(row.policy) << ',' << format_number(row.stats.mean) << ','
        << format_number(row.stats.std) << ',' << format_number(row.stats.min) << ','
        << row.stats.trials << '\n';
  }
}

void write_levels_json(std::ostream& out, const FareLadder& ladder, const ProtectionResult& result) {
  out << "{\n  \"fares\": ";
  json_array<double>(out, ladder.fares());
  out << ",\n  \"capacity\": " << ladder.capacity();
  out << ",\n  \"gamma\": " << format_number(result.gamma);
  out << ",\n  \"epsilon\": " << format_number(result.epsilon);
  out << ",\n  \"beta_lower\": " << format_number(result.beta_lower);
  out << ",\n  \"search_passes\": " << result.search_passes;
  out << ",\n  \"levels\": ";
  json_array<double>(out, result.levels.values());
  out << ",\n  \"increments\": {\"c\": ";
  json_array(out, result.candidate.c);
  out << ", \"d\": ";
  json_array(out, result.candidate.d);
  out << "}\n}\n";
}

void write_lp_solution_json(std::ostream& out, const FareLadder& ladder, const Advice& advice,
                            const LpSolution& solution) {
  out << "{\n  \"fares\": ";
  json_array<double>(out, ladder.fares());
  out << ",\n  \"capacity\": " << ladder.capacity();
  out << ",\n  \"advice\": ";
  json_array<int>(out, advice.counts());
  out << ",\n  \"gamma\": " << format_number(solution.gamma);
  out << ",\n  \"status\": \"" << to_string(solution.status) << '"';
  out << ",\n  \"iterations\": " << solution.iterations;
  if (solution.optimal()) {
    out << ",\n  \"beta\": " << format_number(solution.beta_star);
    out << ",\n  \"max_violation\": " << format_number(solution.max_violation);
    out << ",\n  \"x\": ";
    json_array(out, solution.x);
    out << ",\n  \"y\": [";
    for (std::size_t k = 0; k < solution.y.size(); ++k) {
      out << (k ? ",\n    " : "\n    ");
      json_array(out, solution.y[k]);
    }
    out << "\n  ]";
  }
  out << "\n}\n";
}

}  // namespace rmadvice
