#include "tschwarz/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tschwarz {

namespace {

struct Layout {
  std::size_t n;
  std::size_t nodes;

  std::size_t y(std::size_t m, std::size_t i) const { return 2 * n * m + i; }
  std::size_t lambda(std::size_t m, std::size_t i) const { return 2 * n * m + n + i; }
  std::size_t size() const { return 2 * n * nodes; }
};

void check_data(const InterfaceCondition& c, std::size_t n) {
  if (c.data.size() != n) {
    throw std::invalid_argument(fmt::format("interface data for {} has dimension {}, expected {}",
                                            to_string(c.kind), c.data.size(), n));
  }
}

// Writes n interface rows starting at `row0` for node `m`.
void put_interface(BandedMatrix& mat, Vector& rhs, const Layout& lay, std::size_t row0,
                   std::size_t m, const InterfaceCondition& cond, const ControlProblem& prob,
                   double t) {
  check_data(cond, lay.n);
  const InterfaceRows rows = interface_row(cond.kind, prob, t);
  for (std::size_t i = 0; i < lay.n; ++i) {
    for (std::size_t j = 0; j < lay.n; ++j) {
      if (rows.y_coeff(i, j) != 0.0) mat(row0 + i, lay.y(m, j)) = rows.y_coeff(i, j);
      if (rows.lambda_coeff(i, j) != 0.0)
        mat(row0 + i, lay.lambda(m, j)) = rows.lambda_coeff(i, j);
    }
    rhs[row0 + i] = cond.data[i] + rows.offset[i];
  }
}

bool same_time(double a, double b, double horizon) {
  return std::abs(a - b) <= 1e-12 * horizon;
}

Trajectory unpack(const Vector& x, const TimeGrid& grid, std::size_t n) {
  const Layout lay{n, grid.nodes()};
  Trajectory traj{grid, std::vector<Vector>(grid.nodes(), Vector(n)),
                  std::vector<Vector>(grid.nodes(), Vector(n))};
  for (std::size_t m = 0; m < grid.nodes(); ++m)
    for (std::size_t i = 0; i < n; ++i) {
      traj.y[m][i] = x[lay.y(m, i)];
      traj.lambda[m][i] = x[lay.lambda(m, i)];
    }
  return traj;
}

Vector solve_checked(const LinearSystem& sys) {
  Vector x = BandedLU(sys.matrix).solve_refined(sys.matrix, sys.rhs);
  const Vector mx = sys.matrix.apply(x);
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) res = std::max(res, std::abs(mx[i] - sys.rhs[i]));
  const double scale = sys.matrix.norm_inf() * norm_inf(x) + norm_inf(sys.rhs);
  // Non-finite data is passed through; callers classify it as divergence.
  if (std::isfinite(res) && std::isfinite(scale) && res > 1e-9 * scale) {
    throw std::runtime_error(
        fmt::format("all-at-once solve residual {:.3e} exceeds 1e-9 * {:.3e}", res, scale));
  }
  return x;
}

}  // namespace

InterfaceRows interface_row(InterfaceKind kind, const ControlProblem& prob, double t) {
  const std::size_t n = prob.dim();
  InterfaceRows rows{DenseMatrix(n, n), DenseMatrix(n, n), Vector(n, 0.0)};
  switch (kind) {
    case InterfaceKind::StateValue:
      rows.y_coeff = DenseMatrix::identity(n);
      break;
    case InterfaceKind::AdjointValue:
      rows.lambda_coeff = DenseMatrix::identity(n);
      break;
    case InterfaceKind::StateDerivative:
      // dy/dt = g  <=>  -A y + lambda / nu = g
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows.y_coeff(i, j) = -prob.A()(i, j);
        rows.lambda_coeff(i, i) = 1.0 / prob.nu();
      }
      break;
    case InterfaceKind::AdjointDerivative: {
      // dlambda/dt = g  <=>  y + A^T lambda = g + target(t)
      const Vector target = prob.target(t);
      for (std::size_t i = 0; i < n; ++i) {
        rows.y_coeff(i, i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) rows.lambda_coeff(i, j) = prob.A()(j, i);
        rows.offset[i] = target[i];
      }
      break;
    }
  }
  return rows;
}

LinearSystem assemble_system(const ControlProblem& prob, const TimeGrid& grid,
                             const BoundaryPair& bc) {
  const std::size_t n = prob.dim();
  const std::size_t nt = grid.intervals();
  const Layout lay{n, grid.nodes()};
  const std::size_t band = 3 * n - 1;
  LinearSystem sys{BandedMatrix(lay.size(), band, band), Vector(lay.size(), 0.0)};
  BandedMatrix& mat = sys.matrix;
  Vector& rhs = sys.rhs;

  std::vector<Vector> target(grid.nodes());
  for (std::size_t m = 0; m < grid.nodes(); ++m) target[m] = prob.target(grid.node(m));

  if (std::holds_alternative<InitialState>(bc.left)) {
    for (std::size_t i = 0; i < n; ++i) {
      mat(i, lay.y(0, i)) = 1.0;
      rhs[i] = prob.y0()[i];
    }
  } else {
    put_interface(mat, rhs, lay, 0, 0, std::get<InterfaceCondition>(bc.left), prob,
                  grid.t_start());
  }

  const double inv_h = 1.0 / grid.step();
  const double half_inv_nu = 0.5 / prob.nu();
  const DenseMatrix& a = prob.A();
  for (std::size_t m = 0; m < nt; ++m) {
    const std::size_t ry = n + 2 * n * m;
    const std::size_t rl = ry + n;
    for (std::size_t i = 0; i < n; ++i) {
      // (y_{m+1} - y_m)/h + A (y_{m+1} + y_m)/2 - (lambda_{m+1} + lambda_m)/(2 nu) = 0
      for (std::size_t j = 0; j < n; ++j) {
        const double aij = 0.5 * a(i, j);
        if (aij == 0.0 && i != j) continue;
        mat(ry + i, lay.y(m + 1, j)) += aij;
        mat(ry + i, lay.y(m, j)) += aij;
      }
      mat(ry + i, lay.y(m + 1, i)) += inv_h;
      mat(ry + i, lay.y(m, i)) -= inv_h;
      mat(ry + i, lay.lambda(m + 1, i)) -= half_inv_nu;
      mat(ry + i, lay.lambda(m, i)) -= half_inv_nu;

      // (lambda_{m+1} - lambda_m)/h - (y_{m+1} + y_m)/2 - A^T (lambda_{m+1} + lambda_m)/2
      //   = -(target_{m+1} + target_m)/2
      for (std::size_t j = 0; j < n; ++j) {
        const double aji = 0.5 * a(j, i);
        if (aji == 0.0 && i != j) continue;
        mat(rl + i, lay.lambda(m + 1, j)) -= aji;
        mat(rl + i, lay.lambda(m, j)) -= aji;
      }
      mat(rl + i, lay.lambda(m + 1, i)) += inv_h;
      mat(rl + i, lay.lambda(m, i)) -= inv_h;
      mat(rl + i, lay.y(m + 1, i)) -= 0.5;
      mat(rl + i, lay.y(m, i)) -= 0.5;
      rhs[rl + i] = -0.5 * (target[m + 1][i] + target[m][i]);
    }
  }

  const std::size_t r0 = n + 2 * n * nt;
  if (std::holds_alternative<TerminalRobin>(bc.right)) {
    const Vector& tT = target[nt];
    for (std::size_t i = 0; i < n; ++i) {
      mat(r0 + i, lay.lambda(nt, i)) = 1.0;
      mat(r0 + i, lay.y(nt, i)) = prob.gamma();
      rhs[r0 + i] = prob.gamma() * tT[i];
    }
  } else {
    put_interface(mat, rhs, lay, r0, nt, std::get<InterfaceCondition>(bc.right), prob,
                  grid.t_end());
  }
  return sys;
}

LinearSystem assemble_monolithic(const ControlProblem& prob, const TimeGrid& grid) {
  if (!same_time(grid.t_start(), 0.0, prob.horizon()) ||
      !same_time(grid.t_end(), prob.horizon(), prob.horizon())) {
    throw std::invalid_argument(
        fmt::format("monolithic grid must span (0, {}), got ({}, {})", prob.horizon(),
                    grid.t_start(), grid.t_end()));
  }
  return assemble_system(prob, grid, BoundaryPair{InitialState{}, TerminalRobin{}});
}

Trajectory solve_monolithic(const ControlProblem& prob, const TimeGrid& grid) {
  return unpack(solve_checked(assemble_monolithic(prob, grid)), grid, prob.dim());
}

Trajectory solve_subdomain(const ControlProblem& prob, const TimeGrid& subgrid,
                           const BoundaryPair& bc) {
  const double T = prob.horizon();
  if (subgrid.t_start() < -1e-12 * T || subgrid.t_end() > T * (1.0 + 1e-12)) {
    throw std::invalid_argument("subdomain grid lies outside (0, T)");
  }
  const bool starts_at_zero = same_time(subgrid.t_start(), 0.0, T);
  const bool ends_at_T = same_time(subgrid.t_end(), T, T);
  if (starts_at_zero != std::holds_alternative<InitialState>(bc.left)) {
    throw std::invalid_argument(
        starts_at_zero ? "a subdomain starting at t=0 needs the initial condition on the left"
                       : "the initial condition can only be imposed at t=0");
  }
  if (ends_at_T != std::holds_alternative<TerminalRobin>(bc.right)) {
    throw std::invalid_argument(
        ends_at_T ? "a subdomain ending at t=T needs the terminal condition on the right"
                  : "the terminal condition can only be imposed at t=T");
  }
  return unpack(solve_checked(assemble_system(prob, subgrid, bc)), subgrid, prob.dim());
}

Vector extract_interface(const Trajectory& traj, InterfaceKind kind, const ControlProblem& prob,
                         TrajectoryEnd end) {
  if (traj.y.empty()) throw std::invalid_argument("extract_interface: empty trajectory");
  const std::size_t m = end == TrajectoryEnd::First ? 0 : traj.y.size() - 1;
  const double t = end == TrajectoryEnd::First ? traj.grid.t_start() : traj.grid.t_end();
  const Vector& y = traj.y[m];
  const Vector& lam = traj.lambda[m];
  switch (kind) {
    case InterfaceKind::StateValue: return y;
    case InterfaceKind::AdjointValue: return lam;
    case InterfaceKind::StateDerivative: {
      Vector v = prob.A().apply(y);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = -v[i] + lam[i] / prob.nu();
      return v;
    }
    case InterfaceKind::AdjointDerivative: {
      Vector v = prob.A().apply_transpose(lam);
      const Vector target = prob.target(t);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += y[i] - target[i];
      return v;
    }
  }
  throw std::logic_error("extract_interface: invalid kind");
}

Trajectory restrict_nodes(const Trajectory& traj, std::size_t first, std::size_t last) {
  if (first >= last || last >= traj.y.size()) {
    throw std::invalid_argument(fmt::format("restrict_nodes: invalid range [{}, {}]", first, last));
  }
  Trajectory out{TimeGrid(traj.grid.node(first), traj.grid.node(last), last - first),
                 {traj.y.begin() + first, traj.y.begin() + last + 1},
                 {traj.lambda.begin() + first, traj.lambda.begin() + last + 1}};
  return out;
}

double max_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.y.size() != b.y.size() || a.dim() != b.dim()) {
    throw std::invalid_argument("max_deviation: trajectories differ in shape");
  }
  double e = 0.0;
  for (std::size_t m = 0; m < a.y.size(); ++m)
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double dy = std::abs(a.y[m][i] - b.y[m][i]);
      const double dl = std::abs(a.lambda[m][i] - b.lambda[m][i]);
      // std::max drops NaN, so return it directly
      if (std::isnan(dy) || std::isnan(dl)) return std::nan("");
      e = std::max({e, dy, dl});
    }
  return e;
}

std::string to_csv(const Trajectory& traj) {
  const std::size_t n = traj.dim();
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += fmt::format(",y_{}", i);
  for (std::size_t i = 1; i <= n; ++i) out += fmt::format(",lambda_{}", i);
  out += '\n';
  for (std::size_t m = 0; m < traj.y.size(); ++m) {
    out += fmt::format("{:.17g}", traj.grid.node(m));
    for (double v : traj.y[m]) out += fmt::format(",{:.17g}", v);
    for (double v : traj.lambda[m]) out += fmt::format(",{:.17g}", v);
    out += '\n';
  }
  return out;
}

}  // namespace tschwarz
