#pragma once

#include <string>
#include <variant>

#include "tschwarz/core_model.hpp"
#include "tschwarz/numerics.hpp"

namespace tschwarz {

/// y(t_start) = y0 of the problem.
struct InitialState {};
/// lambda(T) + gamma y(T) = gamma target(T).
struct TerminalRobin {};

using LeftCondition = std::variant<InitialState, InterfaceCondition>;
using RightCondition = std::variant<TerminalRobin, InterfaceCondition>;

struct BoundaryPair {
  LeftCondition left;
  RightCondition right;
};

struct LinearSystem {
  BandedMatrix matrix;
  Vector rhs;
};

/**
 * n equations over the (y, lambda) unknowns of one node:
 *   y_coeff * y + lambda_coeff * lambda = data + offset.
 *
 * Derivative kinds go through the optimality system itself:
 *   dy/dt      = -A y + lambda / nu
 *   dlambda/dt =  y + A^T lambda - target
 */
struct InterfaceRows {
  DenseMatrix y_coeff;
  DenseMatrix lambda_coeff;
  Vector offset;
};

InterfaceRows interface_row(InterfaceKind kind, const ControlProblem& prob, double t);

/// Crank-Nicolson all-at-once system on `grid` with the given end conditions.
/// Unknowns are node-major (y_m, lambda_m); rows are the left condition, then
/// 2n rows per interval, then the right condition. Bandwidth is 3n - 1 each side.
LinearSystem assemble_system(const ControlProblem& prob, const TimeGrid& grid,
                             const BoundaryPair& bc);

/// assemble_system with the physical conditions at both ends of (0, T).
LinearSystem assemble_monolithic(const ControlProblem& prob, const TimeGrid& grid);

Trajectory solve_monolithic(const ControlProblem& prob, const TimeGrid& grid);

/// Solves on a subgrid. An end at t = 0 must carry InitialState, an end at
/// t = T must carry TerminalRobin, and interior ends must carry interface data.
Trajectory solve_subdomain(const ControlProblem& prob, const TimeGrid& subgrid,
                           const BoundaryPair& bc);

enum class TrajectoryEnd { First, Last };

/// Reads a value kind at the end node, or evaluates a derivative kind there
/// through the optimality system.
Vector extract_interface(const Trajectory& traj, InterfaceKind kind, const ControlProblem& prob,
                         TrajectoryEnd end);

/// Nodes [first, last] of a trajectory as a new trajectory.
Trajectory restrict_nodes(const Trajectory& traj, std::size_t first, std::size_t last);

/// Max-norm deviation over all nodes and both fields; grids must match in size.
double max_deviation(const Trajectory& a, const Trajectory& b);

/// Header `t,y_1..y_n,lambda_1..lambda_n`.
std::string to_csv(const Trajectory& traj);

}  // namespace tschwarz
