#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tschwarz/experiments.hpp"

namespace tschwarz::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  SpectralParams params = kReferenceParams;
  double length = 1.0;
  std::size_t nx = 32;
  std::size_t nt = 32;
  std::string out;
};

void add_params(CLI::App* app, Common& c) {
  app->add_option("--nu", c.params.nu, "Control cost weight")->capture_default_str();
  app->add_option("--gamma", c.params.gamma, "Terminal tracking weight")->capture_default_str();
  app->add_option("--T", c.params.horizon, "Time horizon")->capture_default_str();
  app->add_option("--alpha", c.params.alpha, "Interface time")->capture_default_str();
}

void add_mesh(CLI::App* app, Common& c) {
  app->add_option("--L", c.length, "Length of the spatial interval")->capture_default_str();
  app->add_option("--nx", c.nx, "Spatial intervals")->capture_default_str();
  app->add_option("--nt", c.nt, "Time intervals")->capture_default_str();
}

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

fs::path output_file(const Common& c, const std::string& fallback) {
  if (!c.out.empty()) return c.out;
  return default_output_dir() / fallback;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  f << text;
}

void print_params(std::ostream& out, const SpectralParams& p) {
  fmt::print(out, "nu={:g} gamma={:g} T={:g} alpha={:g}\n", p.nu, p.gamma, p.horizon, p.alpha);
}

void print_mesh(std::ostream& out, const Common& c) {
  fmt::print(out, "L={:g} nx={} nt={}\n", c.length, c.nx, c.nt);
}

double target_fn(double x, double t) {
  return std::sin(std::numbers::pi * x) * (2.0 * t * t + t);
}

HeatProblem make_heat(const Common& c) {
  return heat_problem_1d(c.length, c.nx, c.params.nu, c.params.gamma, c.params.horizon,
                         target_fn);
}

Variant variant_arg(const std::string& name) {
  try {
    return parse_variant(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double snapped_alpha(const Common& c) {
  ExperimentSpec spec;
  spec.params = c.params;
  spec.nt = c.nt;
  return effective_alpha(spec);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schwarz methods in time for parabolic optimal control", "tschwarz"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  std::string variant_name = "SD1";
  std::optional<double> theta;
  bool theta_opt = false;
  bool literal = false;

  // rho-sweep
  auto* sweep_cmd = app.add_subcommand("rho-sweep", "Tabulate the convergence factor over d");
  add_params(sweep_cmd, common);
  sweep_cmd->add_option("--variant", variant_name, "SD1..SD4, SN1..SN4")->capture_default_str();
  auto* theta_flag = sweep_cmd->add_option("--theta", theta, "Relaxation parameter (SD1/SN1)");
  sweep_cmd->add_flag("--theta-opt", theta_opt, "Use the optimal relaxation parameter")
      ->excludes(theta_flag);
  double d_min = 1e-2, d_max = 1e4;
  std::size_t points = 400;
  bool with_zero = true;
  sweep_cmd->add_option("--d-min", d_min, "Smallest positive d")->capture_default_str();
  sweep_cmd->add_option("--d-max", d_max, "Largest d")->capture_default_str();
  sweep_cmd->add_option("--points", points, "Log-spaced points")->capture_default_str();
  sweep_cmd->add_flag("!--no-zero", with_zero, "Do not prepend d = 0");
  sweep_cmd->add_option("--out", common.out, "CSV path (default: $TSCHWARZ_OUTPUT_DIR/rho-<variant>.csv)");

  // theta
  auto* theta_cmd = app.add_subcommand("theta", "Print the optimal relaxation parameter");
  add_params(theta_cmd, common);
  theta_cmd->add_option("--variant", variant_name, "SD1 or SN1")->capture_default_str();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve the monolithic optimality system");
  add_params(solve_cmd, common);
  add_mesh(solve_cmd, common);
  solve_cmd->add_option("--out", common.out, "CSV path (default: $TSCHWARZ_OUTPUT_DIR/solve.csv)");

  // schwarz
  auto* schwarz_cmd = app.add_subcommand("schwarz", "Run the Schwarz iteration on the heat problem");
  add_params(schwarz_cmd, common);
  add_mesh(schwarz_cmd, common);
  SchwarzConfig cfg;
  std::string order = "sequential", init = "random";
  double scale = 1.0;
  std::uint64_t seed = kDefaultSeed;
  schwarz_cmd->add_option("--variant", variant_name, "SD1..SD4, SN1..SN4")->capture_default_str();
  schwarz_cmd->add_option("--theta", cfg.theta, "Relaxation parameter")->capture_default_str();
  schwarz_cmd->add_option("--max-iter", cfg.max_iter, "Iteration limit")->capture_default_str();
  schwarz_cmd->add_option("--tol", cfg.tol, "Relative error target")->capture_default_str();
  schwarz_cmd->add_option("--order", order, "sequential or parallel")
      ->check(CLI::IsMember({"sequential", "parallel"}))
      ->capture_default_str();
  schwarz_cmd->add_option("--init", init, "Initial interface data: zero or random")
      ->check(CLI::IsMember({"zero", "random"}))
      ->capture_default_str();
  schwarz_cmd->add_option("--scale", scale, "Scale of random initial data")->capture_default_str();
  schwarz_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  schwarz_cmd->add_flag("--relax-both", cfg.relax_both, "Relax the I2 payload as well");
  schwarz_cmd->add_option("--out", common.out,
                          "CSV path (default: $TSCHWARZ_OUTPUT_DIR/schwarz-<variant>.csv)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Measure the scalar contraction factor");
  add_params(oracle_cmd, common);
  double d = 10.0;
  std::size_t oracle_nt = 4096;
  OracleOptions oopt;
  oracle_cmd->add_option("--d", d, "Eigenvalue")->capture_default_str();
  oracle_cmd->add_option("--variant", variant_name, "SD1, SD2, SN1 or SN2")->capture_default_str();
  oracle_cmd->add_option("--nt", oracle_nt, "Time intervals")->capture_default_str();
  oracle_cmd->add_option("--theta", oopt.theta, "Relaxation parameter")->capture_default_str();
  oracle_cmd->add_option("--iterations", oopt.iterations, "Schwarz iterations")->capture_default_str();
  oracle_cmd->add_option("--order", order, "sequential or parallel")
      ->check(CLI::IsMember({"sequential", "parallel"}))
      ->capture_default_str();
  oracle_cmd->add_option("--seed", oopt.seed, "Random seed")->capture_default_str();
  oracle_cmd->add_flag("--literal", literal, "Compare against the literal relaxed SN1 factor");

  // reproduce
  auto* repro_cmd = app.add_subcommand("reproduce", "Reproduce a figure panel as CSV files");
  ExperimentSpec spec;
  std::string which, policy = "fixed";
  repro_cmd->add_option("figure", which, "fig-left or fig-right")
      ->required()
      ->check(CLI::IsMember({"fig-left", "fig-right"}));
  add_params(repro_cmd, common);
  add_mesh(repro_cmd, common);
  repro_cmd->add_option("--theta-policy", policy, "none, fixed or optimal")
      ->check(CLI::IsMember({"none", "fixed", "optimal"}))
      ->capture_default_str();
  repro_cmd->add_option("--iterations", spec.iterations, "Schwarz iterations per run")
      ->capture_default_str();
  repro_cmd->add_option("--threshold", spec.threshold, "Relative error for iteration counts")
      ->capture_default_str();
  std::string repro_init = "zero";
  repro_cmd->add_option("--init", repro_init, "Initial interface data: zero or random")
      ->check(CLI::IsMember({"zero", "random"}))
      ->capture_default_str();
  repro_cmd->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  repro_cmd->add_option("--out", common.out, "Output directory (default: $TSCHWARZ_OUTPUT_DIR)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Run the property suite");
  std::uint64_t validate_seed = kDefaultSeed;
  validate_cmd->add_option("--seed", validate_seed, "Random seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep_cmd) {
      const Variant v = variant_arg(variant_name);
      print_params(out, common.params);
      if (theta_opt) theta = optimal_theta(v, common.params);
      if (!(d_min > 0.0 && d_max > d_min && points >= 2))
        throw UsageError("need 0 < d-min < d-max and at least two points");
      std::vector<double> grid;
      if (with_zero) grid.push_back(0.0);
      for (std::size_t i = 0; i < points; ++i)
        grid.push_back(d_min * std::pow(d_max / d_min, static_cast<double>(i) / (points - 1)));
      grid.back() = d_max;
      const RhoTable table = sweep(v, grid, common.params, theta);
      const fs::path path = output_file(common, fmt::format("rho-{}.csv", to_string(v)));
      write_text(path, to_csv(table));
      fmt::print(out, "variant={} theta={} rows={}\nwrote {}\n", to_string(v),
                 theta ? fmt::format("{:.17g}", *theta) : "none", table.rows.size(), path.string());
    } else if (*theta_cmd) {
      const Variant v = variant_arg(variant_name);
      print_params(out, common.params);
      fmt::print(out, "theta*_{}={:.17g}\n", to_string(v), optimal_theta(v, common.params));
    } else if (*solve_cmd) {
      print_params(out, common.params);
      print_mesh(out, common);
      const HeatProblem heat = make_heat(common);
      const Trajectory traj = solve_monolithic(heat.problem, TimeGrid(0.0, common.params.horizon, common.nt));
      const fs::path path = output_file(common, "solve.csv");
      write_text(path, to_csv(traj));
      fmt::print(out, "nodes={} dim={}\nwrote {}\n", traj.grid.nodes(), traj.dim(), path.string());
    } else if (*schwarz_cmd) {
      cfg.variant = variant_arg(variant_name);
      cfg.order = order == "parallel" ? SweepOrder::Parallel : SweepOrder::Sequential;
      if (init == "zero") {
        cfg.init = ZeroInit{};
      } else {
        cfg.init = RandomInit{scale, seed};
      }
      print_params(out, common.params);
      print_mesh(out, common);
      common.params.validate();
      const double alpha = snapped_alpha(common);
      fmt::print(out, "alpha_effective={:.17g} variant={} theta={:g} order={} init={} seed={}\n",
                 alpha, to_string(cfg.variant), cfg.theta, order, init, seed);
      const HeatProblem heat = make_heat(common);
      const TimeGrid grid(0.0, common.params.horizon, common.nt);
      const Decomposition decomp = Decomposition::split(grid, alpha);
      const Trajectory ref = solve_monolithic(heat.problem, grid);
      const SchwarzReport report = run_schwarz(heat.problem, decomp, cfg, ref);
      const fs::path path = output_file(common, fmt::format("schwarz-{}.csv", to_string(cfg.variant)));
      write_text(path, to_csv(report));
      const double last = report.iterations.empty() ? 0.0 : report.relative_error(report.iterations.size());
      fmt::print(out, "iterations={} converged={} diverged={} initial_error={:.6e} final_relative_error={:.6e}\n",
                 report.iterations_used(), report.converged, report.diverged,
                 report.initial_error, last);
      fmt::print(out, "wrote {}\n", path.string());
    } else if (*oracle_cmd) {
      const Variant v = variant_arg(variant_name);
      oopt.order = order == "parallel" ? SweepOrder::Parallel : SweepOrder::Sequential;
      print_params(out, common.params);
      fmt::print(out, "d={:g} variant={} nt={} theta={:g} iterations={} order={}\n", d,
                 to_string(v), oracle_nt, oopt.theta, oopt.iterations, order);
      const OracleResult r = scalar_contraction_oracle(d, common.params, v, oracle_nt, oopt);
      fmt::print(out, "measured={:.17g}\nanalytic={:.17g}\n", r.measured, r.analytic);
      if (literal) {
        fmt::print(out, "analytic_literal={:.17g}\n",
                   rho_relaxed(v, d, oopt.theta, common.params, RelaxationForm::Literal));
      }
    } else if (*repro_cmd) {
      spec.params = common.params;
      spec.length = common.length;
      spec.nx = common.nx;
      spec.nt = common.nt;
      spec.zero_init = repro_init == "zero";
      spec.theta_policy = policy == "none"    ? ThetaPolicy::None
                          : policy == "fixed" ? ThetaPolicy::Fixed
                                              : ThetaPolicy::Optimal;
      spec.output_dir = common.out.empty() ? default_output_dir() : fs::path(common.out);
      print_params(out, spec.params);
      print_mesh(out, common);
      if (which == "fig-left") {
        const auto tables = fig_left(spec);
        fmt::print(out, "curves={}\nwrote {}\n", tables.size(), (spec.output_dir / which).string());
      } else {
        spec.validate();
        fmt::print(out, "alpha_effective={:.17g} init={} theta_policy={} threshold={:g}\n",
                   effective_alpha(spec), repro_init, policy, spec.threshold);
        const FigRightResult res = fig_right(spec);
        fmt::print(out, "d_min={:.6f} d_max={:.6f}\n", res.spectrum.front(), res.spectrum.back());
        for (const NamedReport& r : res.runs) {
          const auto k = iterations_to_reach(r.report, spec.threshold);
          const auto kc = res.calibrated_threshold
                              ? iterations_to_reach(r.report, *res.calibrated_threshold)
                              : std::nullopt;
          fmt::print(out, "{:<16} iterations={:<3} calibrated={:<3} diverged={}\n", r.curve,
                     k ? std::to_string(*k) : "-", kc ? std::to_string(*kc) : "-",
                     r.report.diverged);
        }
        if (res.calibrated_threshold)
          fmt::print(out, "calibrated_threshold={:g}\n", *res.calibrated_threshold);
        fmt::print(out, "wrote {}\n", (spec.output_dir / which).string());
      }
    } else if (*validate_cmd) {
      fmt::print(out, "seed={}\n", validate_seed);
      const PropertyReport report = validate_all(validate_seed);
      out << report.to_text();
      fmt::print(out, "{}\n", report.passed() ? "all checks passed" : "validation FAILED");
      return report.passed() ? kExitOk : kExitValidation;
    }
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace tschwarz::cli
