#include "tschwarz/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace tschwarz {

namespace {

// Uniform in [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double signed_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

Vector relax(const Vector& previous, const Vector& fresh, double theta) {
  if (theta == 1.0) return fresh;
  Vector out(previous.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - theta) * previous[i] + theta * fresh[i];
  return out;
}

struct SubdomainPair {
  Trajectory first;
  Trajectory second;
};

Trajectory solve_first(const ControlProblem& prob, const TimeGrid& grid, InterfaceKind kind,
                       const Vector& data) {
  return solve_subdomain(prob, grid, BoundaryPair{InitialState{}, InterfaceCondition{kind, data}});
}

Trajectory solve_second(const ControlProblem& prob, const TimeGrid& grid, InterfaceKind kind,
                        const Vector& data) {
  return solve_subdomain(prob, grid,
                         BoundaryPair{InterfaceCondition{kind, data}, TerminalRobin{}});
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void SchwarzConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument(fmt::format("theta={} must lie in (0, 1]", theta));
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(divergence_factor > 1.0)) throw std::invalid_argument("divergence_factor must exceed 1");
  if (const auto* r = std::get_if<RandomInit>(&init); r && !(r->scale > 0.0))
    throw std::invalid_argument("random init scale must be positive");
}

SchwarzState initial_payload(const SchwarzConfig& cfg, const ControlProblem& prob) {
  const std::size_t n = prob.dim();
  SchwarzState state{transmission_table(cfg.variant), Vector(n, 0.0), Vector(n, 0.0)};
  if (const auto* r = std::get_if<RandomInit>(&cfg.init)) {
    std::mt19937_64 rng(r->seed);
    for (double& x : state.to_I1) x = r->scale * signed_unit(rng);
    for (double& x : state.to_I2) x = r->scale * signed_unit(rng);
  } else if (const auto* e = std::get_if<ExplicitInit>(&cfg.init)) {
    if (e->to_I1.size() != n || e->to_I2.size() != n)
      throw std::invalid_argument("explicit initial payloads must match the problem dimension");
    state.to_I1 = e->to_I1;
    state.to_I2 = e->to_I2;
  }
  return state;
}

double SchwarzReport::relative_error(std::size_t k) const {
  if (k < 1 || k > iterations.size()) throw std::out_of_range("relative_error: no such iteration");
  return iterations[k - 1].error / initial_error;
}

SchwarzReport run_schwarz(const ControlProblem& prob, const Decomposition& decomp,
                          const SchwarzConfig& cfg, const Trajectory& reference) {
  cfg.validate();
  if (reference.y.size() != decomp.global().nodes() || reference.dim() != prob.dim()) {
    throw std::invalid_argument("reference trajectory does not live on the decomposition grid");
  }
  const std::size_t mid = decomp.interface_node();
  const Trajectory ref1 = restrict_nodes(reference, 0, mid);
  const Trajectory ref2 = restrict_nodes(reference, mid, reference.y.size() - 1);

  SchwarzState state = initial_payload(cfg, prob);
  const TransmissionSpec spec = state.spec;
  SchwarzReport report{cfg.variant, cfg.theta, cfg.order, decomp.alpha(), {}, false, false, 0.0,
                       cfg.tol};

  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    IterationRecord rec{k, 0.0, state.to_I1, {}};
    Trajectory t1 = solve_first(prob, decomp.grid1(), spec.at_I1, state.to_I1);
    Vector from_I1 = extract_interface(t1, spec.at_I2, prob, TrajectoryEnd::Last);
    if (cfg.order == SweepOrder::Sequential) {
      state.to_I2 = cfg.relax_both && k > 1 ? relax(state.to_I2, from_I1, cfg.theta) : from_I1;
    }
    rec.payload_I2 = state.to_I2;
    Trajectory t2 = solve_second(prob, decomp.grid2(), spec.at_I2, state.to_I2);
    Vector from_I2 = extract_interface(t2, spec.at_I1, prob, TrajectoryEnd::First);

    state.to_I1 = relax(state.to_I1, from_I2, cfg.theta);
    if (cfg.order == SweepOrder::Parallel) {
      state.to_I2 = cfg.relax_both ? relax(state.to_I2, from_I1, cfg.theta) : from_I1;
    }

    const double e1 = max_deviation(t1, ref1);
    const double e2 = max_deviation(t2, ref2);
    rec.error = std::isnan(e1) || std::isnan(e2) ? std::nan("") : std::max(e1, e2);
    report.iterations.push_back(std::move(rec));

    const double err = report.iterations.back().error;
    if (k == 1) report.initial_error = err;
    if (!std::isfinite(err) || !all_finite(state.to_I1) || !all_finite(state.to_I2) ||
        err > cfg.divergence_factor * report.initial_error) {
      report.diverged = true;
      break;
    }
    if (err <= cfg.tol * report.initial_error) {
      report.converged = true;
      break;
    }
  }
  return report;
}

double measured_contraction(const SchwarzReport& report) {
  const auto& it = report.iterations;
  if (it.size() < 4) {
    throw std::invalid_argument(
        fmt::format("measured_contraction needs at least 4 iterations, got {}", it.size()));
  }
  for (std::size_t k = 1; k < it.size(); ++k) {
    if (!(it[k].error > 0.0)) {
      throw std::invalid_argument(
          fmt::format("measured_contraction: error of iteration {} is zero", it[k].iter));
    }
  }
  const double first = it[1].error;
  const double last = it.back().error;
  return std::exp((std::log(last) - std::log(first)) / static_cast<double>(it.size() - 2));
}

std::string to_csv(const SchwarzReport& report) {
  std::string out = "iter,error,payload_norm_I1,payload_norm_I2\n";
  for (const IterationRecord& r : report.iterations) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.iter, r.error, norm_2(r.payload_I1),
                       norm_2(r.payload_I2));
  }
  return out;
}

ScalarTrace scalar_trace(double d, const SpectralParams& p, Variant v, std::size_t nt,
                         const OracleOptions& opt) {
  p.validate();
  if (!(opt.theta > 0.0 && opt.theta <= 1.0))
    throw std::invalid_argument(fmt::format("theta={} must lie in (0, 1]", opt.theta));
  if (opt.iterations < 4) throw std::invalid_argument("scalar_trace needs at least 4 iterations");
  const auto n1 = static_cast<std::size_t>(
      std::llround(static_cast<double>(nt) * p.alpha / p.horizon));
  if (n1 < 1 || n1 >= nt) {
    throw std::invalid_argument(fmt::format("nt={} is too coarse to place alpha={}", nt, p.alpha));
  }
  const TimeGrid g1(0.0, p.alpha, n1);
  const TimeGrid g2(p.alpha, p.horizon, nt - n1);
  const ControlProblem prob = build_problem(
      DenseMatrix(1, 1, d), Vector{0.0}, [](double) { return Vector{0.0}; }, p.nu, p.gamma,
      p.horizon);

  const TransmissionSpec spec = transmission_table(v);
  std::mt19937_64 rng(opt.seed);
  // Keep the seeds away from zero so the logs below stay finite.
  auto draw = [&] {
    const double u = signed_unit(rng);
    return std::copysign(0.5 + 0.5 * std::abs(u), u);
  };
  Vector p1{draw()};
  Vector p2{draw()};
  double log_scale = 0.0;

  ScalarTrace trace;
  for (std::size_t k = 0; k < opt.iterations; ++k) {
    trace.log_I1.push_back(std::log(std::abs(p1[0])) + log_scale);
    const Trajectory t1 = solve_first(prob, g1, spec.at_I1, p1);
    const Vector from_I1 = extract_interface(t1, spec.at_I2, prob, TrajectoryEnd::Last);
    if (opt.order == SweepOrder::Sequential) p2 = from_I1;
    trace.log_I2.push_back(std::log(std::abs(p2[0])) + log_scale);
    const Trajectory t2 = solve_second(prob, g2, spec.at_I2, p2);
    const Vector from_I2 = extract_interface(t2, spec.at_I1, prob, TrajectoryEnd::First);
    p1 = relax(p1, from_I2, opt.theta);
    if (opt.order == SweepOrder::Parallel) p2 = from_I1;

    const double m = std::max(std::abs(p1[0]), std::abs(p2[0]));
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::runtime_error("scalar_trace: payload collapsed to zero or overflowed");
    }
    p1[0] /= m;
    p2[0] /= m;
    log_scale += std::log(m);
  }
  return trace;
}

OracleResult scalar_contraction_oracle(double d, const SpectralParams& p, Variant v,
                                       std::size_t nt, const OracleOptions& opt) {
  if (v != Variant::SD1 && v != Variant::SD2 && v != Variant::SN1 && v != Variant::SN2) {
    throw std::invalid_argument(
        fmt::format("scalar oracle supports SD1, SD2, SN1, SN2; got {}", to_string(v)));
  }
  if (opt.theta != 1.0 && (v == Variant::SD2 || v == Variant::SN2)) {
    throw std::invalid_argument("relaxation is only analysed for SD1 and SN1");
  }
  const ScalarTrace trace = scalar_trace(d, p, v, nt, opt);
  const auto& l = trace.log_I1;
  const double measured =
      std::exp((l.back() - l[1]) / static_cast<double>(l.size() - 2));
  const double analytic = opt.theta == 1.0 ? rho(v, d, p) : rho_relaxed(v, d, opt.theta, p);
  return {measured, analytic};
}

}  // namespace tschwarz
