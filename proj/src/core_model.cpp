#include "tschwarz/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tschwarz {

ControlProblem::ControlProblem(DenseMatrix a, Vector y0, TargetFn target, double nu,
                               double gamma, double horizon)
    : a_(std::move(a)),
      y0_(std::move(y0)),
      target_(std::move(target)),
      nu_(nu),
      gamma_(gamma),
      horizon_(horizon) {
  if (y0_.empty()) throw std::invalid_argument("problem dimension must be at least 1");
  if (!a_.square() || a_.rows() != y0_.size()) {
    throw std::invalid_argument(fmt::format("A is {}x{} but y0 has dimension {}", a_.rows(),
                                            a_.cols(), y0_.size()));
  }
  if (!(nu_ > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(gamma_ >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!target_) throw std::invalid_argument("target function is empty");
  at_ = a_.transpose();
}

Vector ControlProblem::target(double t) const {
  Vector v = target_(t);
  if (v.size() != dim()) {
    throw std::invalid_argument(
        fmt::format("target returned dimension {} at t={}, expected {}", v.size(), t, dim()));
  }
  return v;
}

ControlProblem build_problem(DenseMatrix a, Vector y0, TargetFn target, double nu, double gamma,
                             double horizon) {
  return ControlProblem(std::move(a), std::move(y0), std::move(target), nu, gamma, horizon);
}

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t nt)
    : t_start_(t_start), t_end_(t_end), nt_(nt) {
  if (nt == 0) throw std::invalid_argument("time grid needs at least one interval");
  if (!(t_end > t_start)) throw std::invalid_argument("time grid must have t_end > t_start");
}

double TimeGrid::node(std::size_t m) const {
  if (m == nt_) return t_end_;
  return t_start_ + static_cast<double>(m) * step();
}

Decomposition::Decomposition(TimeGrid global, std::size_t node)
    : global_(global),
      interface_node_(node),
      alpha_(global.node(node)),
      grid1_(global.t_start(), global.node(node), node),
      grid2_(global.node(node), global.t_end(), global.intervals() - node) {}

Decomposition Decomposition::split(const TimeGrid& global, double alpha) {
  const double h = global.step();
  const double pos = (alpha - global.t_start()) / h;
  const double m = std::round(pos);
  if (std::abs(alpha - (global.t_start() + m * h)) > 0.5e-9 * h) {
    throw std::invalid_argument(
        fmt::format("alpha={} is not a node of the time grid (step {})", alpha, h));
  }
  if (m < 1.0 || m > static_cast<double>(global.intervals()) - 1.0) {
    throw std::invalid_argument(
        fmt::format("alpha={} must be an interior node of ({}, {})", alpha, global.t_start(),
                    global.t_end()));
  }
  return Decomposition(global, static_cast<std::size_t>(m));
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::SD1: return "SD1";
    case Variant::SD2: return "SD2";
    case Variant::SD3: return "SD3";
    case Variant::SD4: return "SD4";
    case Variant::SN1: return "SN1";
    case Variant::SN2: return "SN2";
    case Variant::SN3: return "SN3";
    case Variant::SN4: return "SN4";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Variant v : kAllVariants)
    if (to_string(v) == upper) return v;
  throw std::invalid_argument(fmt::format("unknown variant '{}'", name));
}

bool is_neumann(Variant v) {
  return v == Variant::SN1 || v == Variant::SN2 || v == Variant::SN3 || v == Variant::SN4;
}

std::string_view to_string(InterfaceKind k) {
  switch (k) {
    case InterfaceKind::StateValue: return "y";
    case InterfaceKind::AdjointValue: return "lambda";
    case InterfaceKind::StateDerivative: return "dy/dt";
    case InterfaceKind::AdjointDerivative: return "dlambda/dt";
  }
  return "?";
}

bool is_derivative(InterfaceKind k) {
  return k == InterfaceKind::StateDerivative || k == InterfaceKind::AdjointDerivative;
}

TransmissionSpec transmission_table(Variant v) {
  using K = InterfaceKind;
  switch (v) {
    case Variant::SD1: return {K::AdjointValue, K::StateValue};
    case Variant::SD2: return {K::StateValue, K::AdjointValue};
    case Variant::SD3: return {K::StateValue, K::StateValue};
    case Variant::SD4: return {K::AdjointValue, K::AdjointValue};
    case Variant::SN1: return {K::AdjointDerivative, K::StateDerivative};
    case Variant::SN2: return {K::StateDerivative, K::AdjointDerivative};
    case Variant::SN3: return {K::StateDerivative, K::StateDerivative};
    case Variant::SN4: return {K::AdjointDerivative, K::AdjointDerivative};
  }
  throw std::logic_error("transmission_table: invalid variant");
}

HeatProblem heat_problem_1d(double length, std::size_t nx, double nu, double gamma,
                            double horizon, std::function<double(double, double)> target_fn) {
  if (nx < 2) throw std::invalid_argument("heat_problem_1d needs nx >= 2");
  if (!(length > 0.0)) throw std::invalid_argument("domain length must be positive");
  if (!target_fn) throw std::invalid_argument("target function is empty");
  SpatialMesh mesh{length, nx};
  const std::size_t n = mesh.interior_nodes();
  const double h = mesh.step();
  const double inv_h2 = 1.0 / (h * h);

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0 * inv_h2;
    if (i > 0) a(i, i - 1) = -inv_h2;
    if (i + 1 < n) a(i, i + 1) = -inv_h2;
  }
  auto target = [mesh, fn = std::move(target_fn)](double t) {
    Vector v(mesh.interior_nodes());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(mesh.node(j + 1), t);
    return v;
  };
  return HeatProblem{build_problem(std::move(a), Vector(n, 0.0), std::move(target), nu, gamma,
                                   horizon),
                     mesh};
}

std::vector<Vector> recover_control(const Trajectory& traj, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  std::vector<Vector> u = traj.lambda;
  for (Vector& v : u)
    for (double& x : v) x /= nu;
  return u;
}

}  // namespace tschwarz
