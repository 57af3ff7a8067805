#include "rmadvice/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rmadvice/experiment.hpp"
#include "rmadvice/fare_model.hpp"
#include "rmadvice/frontier.hpp"
#include "rmadvice/parallel.hpp"
#include "rmadvice/pareto_lp.hpp"
#include "rmadvice/policy.hpp"
#include "rmadvice/protection_optimizer.hpp"
#include "rmadvice/report.hpp"

namespace rmadvice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<double> epsilon;
};

struct Context {
  Options opt;
  json config;
  std::ostream& out;
  std::vector<std::string> outputs;
  json summary = json::object();
};

const json& require(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return cfg.at(key);
}

template <class T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

FareLadder load_ladder(const json& cfg) {
  return FareLadder(get_as<std::vector<double>>(require(cfg, "fares"), "fares"),
                    get_as<int>(require(cfg, "capacity"), "capacity"));
}

Advice load_advice(const FareLadder& ladder, const json& v, const char* key) {
  return Advice(ladder, get_as<std::vector<int>>(v, key));
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw ConfigError("gamma grid needs at least one step");
  if (steps == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) g[i] = lo + (hi - lo) * i / (steps - 1);
  g.back() = hi;
  return g;
}

// gamma: number, list, {min, max, steps} (max defaults to c(F)), or absent.
std::vector<double> load_gammas(const FareLadder& ladder, const json& cfg, bool allow_default) {
  if (!cfg.contains("gamma")) {
    if (allow_default) return default_gamma_grid(ladder);
    throw ConfigError("config is missing 'gamma'");
  }
  const json& g = cfg.at("gamma");
  if (g.is_number()) return {g.get<double>()};
  if (g.is_array()) return get_as<std::vector<double>>(g, "gamma");
  if (g.is_object()) {
    const double lo = g.contains("min") ? get_as<double>(g.at("min"), "gamma.min") : 0.0;
    const double hi = g.contains("max") ? get_as<double>(g.at("max"), "gamma.max") : bq_bound(ladder);
    const int steps = g.contains("steps") ? get_as<int>(g.at("steps"), "gamma.steps") : 41;
    return linspace(lo, hi, steps);
  }
  throw ConfigError("config field 'gamma' must be a number, a list or {min, max, steps}");
}

double load_gamma(const FareLadder& ladder, const json& cfg) {
  const auto g = load_gammas(ladder, cfg, false);
  if (g.size() != 1) throw ConfigError("this command needs a single gamma value");
  check_gamma(ladder, g[0]);
  return g[0];
}

double epsilon_of(const Context& ctx) {
  double eps = kDefaultEpsilon;
  if (ctx.config.contains("epsilon")) eps = get_as<double>(ctx.config.at("epsilon"), "epsilon");
  if (ctx.opt.epsilon) eps = *ctx.opt.epsilon;
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  return eps;
}

std::uint64_t seed_of(const Context& ctx) {
  if (ctx.opt.seed) return *ctx.opt.seed;
  if (ctx.config.contains("noise") && ctx.config.at("noise").contains("seed"))
    return get_as<std::uint64_t>(ctx.config.at("noise").at("seed"), "noise.seed");
  if (ctx.config.contains("seed")) return get_as<std::uint64_t>(ctx.config.at("seed"), "seed");
  return 0;
}

std::ofstream open_output(Context& ctx, const std::string& name) {
  const fs::path path = fs::path(ctx.opt.out_dir) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  ctx.outputs.push_back(name);
  return f;
}

int cmd_frontier(Context& ctx) {
  const FareLadder ladder = load_ladder(ctx.config);
  const Advice advice = load_advice(ladder, require(ctx.config, "advice"), "advice");
  const auto grid = load_gammas(ladder, ctx.config, true);
  const double eps = epsilon_of(ctx);
  for (double g : grid) check_gamma(ladder, g);

  const FrontierCurve curve = consistency_frontier(ladder, advice, grid, eps, ctx.opt.threads);
  auto f = open_output(ctx, "frontier.csv");
  write_frontier_csv(f, curve);

  const double rs = relative_suboptimality(curve);
  double min_lp = 1.0;
  for (double b : curve.beta_lp) min_lp = std::min(min_lp, b);
  ctx.summary["rs"] = rs;
  ctx.summary["rs_uncertainty"] = eps / min_lp;
  ctx.summary["bq_consistency"] = curve.bq_consistency;
  ctx.out << "points=" << grid.size() << " rs=" << format_number(rs)
          << " bq_consistency=" << format_number(curve.bq_consistency) << '\n';
  return kExitOk;
}

int cmd_rs_grid(Context& ctx) {
  const FareLadder ladder = load_ladder(ctx.config);
  const int step = get_as<int>(require(ctx.config, "grid_step"), "grid_step");
  const auto gammas = load_gammas(ladder, ctx.config, true);
  const double eps = epsilon_of(ctx);
  for (double g : gammas) check_gamma(ladder, g);
  if (step <= 0 || ladder.capacity() % step != 0)
    throw ConfigError("grid_step must be a positive divisor of the capacity");

  const auto grid = advice_grid(ladder, step);
  std::vector<double> rs(grid.size());
  double min_lp = 1.0;
  std::vector<double> row_min(grid.size(), 1.0);
  parallel_for(grid.size(), ctx.opt.threads, [&](std::size_t i) {
    const FrontierCurve curve = consistency_frontier(ladder, grid[i], gammas, eps);
    rs[i] = relative_suboptimality(curve);
    for (double b : curve.beta_lp) row_min[i] = std::min(row_min[i], b);
  });
  for (double b : row_min) min_lp = std::min(min_lp, b);

  auto f = open_output(ctx, "rs_grid.csv");
  write_rs_grid_csv(f, grid, rs);

  double max_rs = 0.0;
  std::size_t small = 0;
  for (double r : rs) {
    max_rs = std::max(max_rs, r);
    if (r < 0.01) ++small;
  }
  ctx.summary["advice_points"] = grid.size();
  ctx.summary["max_rs"] = max_rs;
  ctx.summary["points_below_0.01"] = small;
  ctx.summary["rs_uncertainty"] = eps / min_lp;
  ctx.out << "advice_points=" << grid.size() << " max_rs=" << format_number(max_rs)
          << " below_0.01=" << small << '\n';
  return kExitOk;
}

Instance load_instance(const Context& ctx, const FareLadder& ladder,
                       const std::optional<Advice>& advice) {
  const json& cfg = ctx.config;
  if (cfg.contains("instance")) {
    auto steps = get_as<std::vector<int>>(cfg.at("instance"), "instance");
    for (int& s : steps) {
      if (s < 1 || static_cast<std::size_t>(s) > ladder.size())
        throw ConfigError("instance entries must be fare indices in 1.." +
                          std::to_string(ladder.size()));
      s -= 1;
    }
    return Instance(std::move(steps));
  }
  if (cfg.contains("sample")) {
    if (!advice) throw ConfigError("sampling an instance needs 'advice'");
    const json& s = cfg.at("sample");
    NoiseConfig noise;
    noise.v = s.contains("v") ? get_as<double>(s.at("v"), "sample.v") : 0.0;
    noise.seed = seed_of(ctx);
    const auto trial = s.contains("trial") ? get_as<std::uint64_t>(s.at("trial"), "sample.trial") : 0;
    check_noise(noise);
    return sample_instance(ladder, *advice, noise, trial);
  }
  throw ConfigError("config needs 'instance' or 'sample'");
}

int cmd_simulate(Context& ctx) {
  const json& cfg = ctx.config;
  const FareLadder ladder = load_ladder(cfg);
  std::optional<Advice> advice;
  if (cfg.contains("advice")) advice = load_advice(ladder, cfg.at("advice"), "advice");
  const std::string policy =
      cfg.contains("policy") ? get_as<std::string>(cfg.at("policy"), "policy") : "lp_optimal";
  const Instance instance = load_instance(ctx, ladder, advice);

  PolicyTrace trace;
  if (policy == "bq") {
    trace = run_protection_policy(ladder, bq_levels(ladder), instance);
  } else if (policy == "levels") {
    ProtectionLevels levels(get_as<std::vector<double>>(require(cfg, "levels"), "levels"));
    if (levels.size() != ladder.size()) throw ConfigError("'levels' needs one entry per fare");
    if (!levels.feasible(ladder.capacity())) throw ConfigError("'levels' exceed the capacity");
    trace = run_protection_policy(ladder, levels, instance);
  } else {
    if (!advice) throw ConfigError("policy '" + policy + "' needs 'advice'");
    const double gamma = load_gamma(ladder, cfg);
    if (policy == "optimal_pl") {
      const ProtectionResult res = optimal_protection_levels(ladder, *advice, gamma, epsilon_of(ctx));
      ctx.summary["levels"] = std::vector<double>(res.levels.values().begin(), res.levels.values().end());
      ctx.summary["beta_lower"] = res.beta_lower;
      trace = run_protection_policy(ladder, res.levels, instance);
    } else if (policy == "lp_optimal" || policy == "relaxed") {
      const LpSolution sol = optimal_consistency(ladder, *advice, gamma);
      const SwitchPlan plan = derive_switch_plan(sol);
      ctx.summary["beta"] = sol.beta_star;
      if (policy == "relaxed") {
        const double re = get_as<double>(require(cfg, "relaxed_epsilon"), "relaxed_epsilon");
        if (!(re > 0.0)) throw ConfigError("relaxed_epsilon must be positive");
        trace = run_relaxed_optimal(ladder, *advice, gamma, re, instance, plan);
      } else {
        trace = run_lp_optimal(ladder, *advice, gamma, instance, plan);
      }
    } else {
      throw ConfigError("unknown policy '" + policy +
                        "' (expected lp_optimal, relaxed, optimal_pl, bq or levels)");
    }
  }

  auto f = open_output(ctx, "trace.csv");
  write_trace_csv(f, ladder, trace);

  const double opt = opt_revenue(ladder, instance);
  ctx.summary["revenue"] = trace.revenue;
  ctx.summary["opt"] = opt;
  ctx.out << "revenue=" << format_number(trace.revenue) << " opt=" << format_number(opt);
  if (opt > 0.0) {
    ctx.summary["cr"] = trace.revenue / opt;
    ctx.out << " cr=" << format_number(trace.revenue / opt);
  }
  if (ctx.summary.contains("beta"))
    ctx.out << " beta=" << format_number(ctx.summary["beta"].get<double>());
  if (trace.trigger_time) ctx.out << " trigger_step=" << *trace.trigger_time + 1;
  ctx.out << '\n';
  return kExitOk;
}

int cmd_protect(Context& ctx) {
  const FareLadder ladder = load_ladder(ctx.config);
  const Advice advice = load_advice(ladder, require(ctx.config, "advice"), "advice");
  const double gamma = load_gamma(ladder, ctx.config);
  const ProtectionResult res = optimal_protection_levels(ladder, advice, gamma, epsilon_of(ctx));
  auto f = open_output(ctx, "levels.json");
  write_levels_json(f, ladder, res);
  ctx.summary["beta_lower"] = res.beta_lower;
  ctx.out << "beta_lower=" << format_number(res.beta_lower) << " levels=";
  for (std::size_t i = 0; i < res.levels.size(); ++i)
    ctx.out << (i ? "," : "") << format_number(res.levels[i]);
  ctx.out << '\n';
  return kExitOk;
}

int cmd_solve_lp(Context& ctx) {
  const FareLadder ladder = load_ladder(ctx.config);
  const Advice advice = load_advice(ladder, require(ctx.config, "advice"), "advice");
  const double gamma = load_gamma(ladder, ctx.config);
  const ParetoModel model = build_pareto_lp(ladder, advice, gamma);
  const LpSolution sol = solve_pareto_lp(model);
  {
    auto f = open_output(ctx, "lp_model.txt");
    write_lp_model(f, model.lp);
  }
  auto f = open_output(ctx, "lp_solution.json");
  write_lp_solution_json(f, ladder, advice, sol);
  ctx.summary["status"] = to_string(sol.status);
  ctx.out << "status=" << to_string(sol.status);
  if (!sol.optimal()) {
    ctx.out << '\n';
    return kExitNumerical;
  }
  ctx.summary["beta"] = sol.beta_star;
  ctx.out << " beta=" << format_number(sol.beta_star) << '\n';
  return kExitOk;
}

int cmd_robustness(Context& ctx) {
  const json& cfg = ctx.config;
  const FareLadder ladder = load_ladder(cfg);
  SweepSpec spec;
  if (cfg.contains("advice_list")) {
    for (const json& a : cfg.at("advice_list")) spec.advice.push_back(load_advice(ladder, a, "advice_list"));
  } else {
    spec.advice.push_back(load_advice(ladder, require(cfg, "advice"), "advice"));
  }
  spec.gammas = load_gammas(ladder, cfg, false);
  const json& noise = require(cfg, "noise");
  if (noise.contains("v_list"))
    spec.v_values = get_as<std::vector<double>>(noise.at("v_list"), "noise.v_list");
  else
    spec.v_values = {get_as<double>(require(noise, "v"), "noise.v")};
  spec.trials = get_as<int>(require(noise, "trials"), "noise.trials");
  spec.seed = seed_of(ctx);
  spec.epsilon = epsilon_of(ctx);
  if (cfg.contains("policies")) {
    spec.policies.clear();
    for (const auto& p : get_as<std::vector<std::string>>(cfg.at("policies"), "policies"))
      spec.policies.push_back(parse_policy(p));
  }
  for (double g : spec.gammas) check_gamma(ladder, g);
  for (double v : spec.v_values) check_noise(NoiseConfig{v, spec.trials, spec.seed});

  const SweepResult res = robustness_sweep(ladder, spec, ctx.opt.threads);
  auto f = open_output(ctx, "robustness.csv");
  write_sweep_csv(f, res);
  ctx.summary["rows"] = res.rows.size();
  ctx.summary["stability_checks"] = res.stability_checks;
  ctx.summary["stability_violations"] = res.stability_violations;
  ctx.out << "rows=" << res.rows.size() << " stability_checks=" << res.stability_checks
          << " stability_violations=" << res.stability_violations << '\n';
  return res.stability_violations == 0 ? kExitOk : kExitNumerical;
}

void write_manifest(Context& ctx, const json& effective) {
  json m;
  m["command"] = ctx.opt.command;
  m["config"] = effective;
  m["config_sha1"] = git_blob_sha1(effective.dump());
  m["outputs"] = ctx.outputs;
  m["summary"] = ctx.summary;
  std::ofstream f(fs::path(ctx.opt.out_dir) / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write manifest.json");
  f << m.dump(2) << '\n';
}

int dispatch(Context& ctx) {
  const std::string& c = ctx.opt.command;
  if (c == "frontier") return cmd_frontier(ctx);
  if (c == "rs-grid") return cmd_rs_grid(ctx);
  if (c == "simulate") return cmd_simulate(ctx);
  if (c == "protect") return cmd_protect(ctx);
  if (c == "solve-lp") return cmd_solve_lp(ctx);
  if (c == "robustness") return cmd_robustness(ctx);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace

std::string git_blob_sha1(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size()) + '\0';
  blob.append(content);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    const unsigned char b = digest[i];
    std::snprintf(buf, sizeof buf, "%02x", b);
    hex += buf;
  }
  return hex;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-leg revenue management with advice: frontiers, policies and sweeps"};
  app.require_subcommand(1, 1);
  Options opt;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  unsigned threads = 1;

  for (const char* name : {"frontier", "rs-grid", "simulate", "protect", "solve-lp", "robustness"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads, 0 for all cores");
    sub->add_option("--epsilon", epsilon, "bisection tolerance (overrides the config)");
  }
  app.get_subcommand("frontier")->description("consistency frontier over a gamma grid");
  app.get_subcommand("rs-grid")->description("relative sub-optimality over an advice grid");
  app.get_subcommand("simulate")->description("run one policy on one instance");
  app.get_subcommand("protect")->description("optimal protection levels");
  app.get_subcommand("solve-lp")->description("solve and dump the consistency LP");
  app.get_subcommand("robustness")->description("noisy-instance average competitive ratios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--epsilon")) opt.epsilon = epsilon;
  }
  opt.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;

  Context ctx{opt, json(), out, {}, json::object()};
  try {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + opt.config_path);
    try {
      ctx.config = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!ctx.config.is_object()) throw ConfigError("config must be a JSON object");
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + opt.out_dir);

    const int code = dispatch(ctx);
    json effective = ctx.config;
    effective["seed"] = seed_of(ctx);
    effective["epsilon"] = epsilon_of(ctx);
    write_manifest(ctx, effective);
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace rmadvice
