#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tschwarz/numerics.hpp"

namespace tschwarz {

/// Desired state trajectory t -> target(t), sampled on demand.
using TargetFn = std::function<Vector(double)>;

/**
 * Semi-discrete linear-quadratic control problem
 *
 *   min 1/2 int_0^T |y - target|^2 + gamma/2 |y(T) - target(T)|^2 + nu/2 int_0^T |u|^2
 *   s.t. y' + A y = u,  y(0) = y0.
 *
 * Only the reduced optimality system in (y, lambda) is ever solved; the
 * control is recovered afterwards as u = lambda / nu.
 */
class ControlProblem {
 public:
  ControlProblem(DenseMatrix a, Vector y0, TargetFn target, double nu, double gamma,
                 double horizon);

  std::size_t dim() const { return y0_.size(); }
  const DenseMatrix& A() const { return a_; }
  const DenseMatrix& A_transpose() const { return at_; }
  const Vector& y0() const { return y0_; }
  Vector target(double t) const;
  double nu() const { return nu_; }
  double gamma() const { return gamma_; }
  double horizon() const { return horizon_; }

 private:
  DenseMatrix a_;
  DenseMatrix at_;
  Vector y0_;
  TargetFn target_;
  double nu_;
  double gamma_;
  double horizon_;
};

ControlProblem build_problem(DenseMatrix a, Vector y0, TargetFn target, double nu, double gamma,
                             double horizon);

/// Uniform mesh t_start + m * step, m = 0..nt.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t nt);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t intervals() const { return nt_; }
  std::size_t nodes() const { return nt_ + 1; }
  double step() const { return (t_end_ - t_start_) / static_cast<double>(nt_); }
  double node(std::size_t m) const;

 private:
  double t_start_;
  double t_end_;
  std::size_t nt_;
};

/// Two non-overlapping time subdomains I1 = (0, alpha), I2 = (alpha, T) sharing
/// the node alpha of a global grid.
class Decomposition {
 public:
  /// Rejects alpha unless it lies within 1e-9 * step / 2 of an interior node.
  static Decomposition split(const TimeGrid& global, double alpha);

  double alpha() const { return alpha_; }
  std::size_t interface_node() const { return interface_node_; }
  const TimeGrid& global() const { return global_; }
  const TimeGrid& grid1() const { return grid1_; }
  const TimeGrid& grid2() const { return grid2_; }

 private:
  Decomposition(TimeGrid global, std::size_t node);

  TimeGrid global_;
  std::size_t interface_node_;
  double alpha_;
  TimeGrid grid1_;
  TimeGrid grid2_;
};

enum class Variant { SD1, SD2, SD3, SD4, SN1, SN2, SN3, SN4 };

inline constexpr std::array<Variant, 8> kAllVariants = {
    Variant::SD1, Variant::SD2, Variant::SD3, Variant::SD4,
    Variant::SN1, Variant::SN2, Variant::SN3, Variant::SN4};

std::string_view to_string(Variant v);
/// Case-insensitive; throws std::invalid_argument on unknown names.
Variant parse_variant(std::string_view name);
bool is_neumann(Variant v);

enum class InterfaceKind { StateValue, AdjointValue, StateDerivative, AdjointDerivative };

std::string_view to_string(InterfaceKind k);
bool is_derivative(InterfaceKind k);

/// Data received by a subdomain at alpha.
struct InterfaceCondition {
  InterfaceKind kind;
  Vector data;
};

/// Which quantity each subdomain receives at alpha.
struct TransmissionSpec {
  InterfaceKind at_I1;
  InterfaceKind at_I2;

  friend bool operator==(const TransmissionSpec&, const TransmissionSpec&) = default;
};

TransmissionSpec transmission_table(Variant v);

struct SpatialMesh {
  double length;
  std::size_t nx;

  double step() const { return length / static_cast<double>(nx); }
  std::size_t interior_nodes() const { return nx - 1; }
  double node(std::size_t j) const { return static_cast<double>(j) * step(); }
};

struct HeatProblem {
  ControlProblem problem;
  SpatialMesh mesh;
};

/// 1D heat control on (0, length) with homogeneous Dirichlet ends, centered
/// second differences and zero initial state. target_fn(x, t) is sampled at
/// the nx - 1 interior nodes.
HeatProblem heat_problem_1d(double length, std::size_t nx, double nu, double gamma,
                            double horizon, std::function<double(double, double)> target_fn);

/// Nodal values of state and adjoint on a grid.
struct Trajectory {
  TimeGrid grid;
  std::vector<Vector> y;
  std::vector<Vector> lambda;

  std::size_t dim() const { return y.empty() ? 0 : y.front().size(); }
};

/// u = lambda / nu at every node.
std::vector<Vector> recover_control(const Trajectory& traj, double nu);

}  // namespace tschwarz
