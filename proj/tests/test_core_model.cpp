#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "tschwarz/core_model.hpp"

using namespace tschwarz;

namespace {

Vector zero1(double) { return {0.0}; }

}  // namespace

TEST_CASE("build_problem accepts a minimal scalar problem") {
  const ControlProblem p = build_problem(DenseMatrix(1, 1, 1.0), {0.0}, zero1, 1.0, 0.0, 1.0);
  CHECK(p.dim() == 1);
  CHECK(p.nu() == 1.0);
  CHECK(p.gamma() == 0.0);
  CHECK(p.target(0.3) == Vector{0.0});
}

TEST_CASE("build_problem rejects bad data") {
  CHECK_THROWS_WITH_AS(build_problem(DenseMatrix(1, 1, 1.0), {0.0}, zero1, 0.0, 0.0, 1.0),
                       doctest::Contains("nu must be positive"), std::invalid_argument);
  CHECK_THROWS_AS(build_problem(DenseMatrix(1, 1, 1.0), {0.0}, zero1, 1.0, -1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(DenseMatrix(1, 1, 1.0), {0.0}, zero1, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(DenseMatrix(2, 2, 1.0), {0.0}, zero1, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(DenseMatrix(1, 2, 1.0), {0.0}, zero1, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_problem(DenseMatrix(0, 0), {}, zero1, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  const ControlProblem p = build_problem(DenseMatrix(1, 1, 1.0), {0.0},
                                         [](double) { return Vector{1.0, 2.0}; }, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(p.target(0.0), std::invalid_argument);
}

TEST_CASE("heat problem on 32 intervals") {
  const HeatProblem h = heat_problem_1d(1.0, 32, 0.1, 10.0, 1.0, [](double x, double t) {
    return std::sin(std::numbers::pi * x) * (2.0 * t * t + t);
  });
  const DenseMatrix& A = h.problem.A();
  REQUIRE(A.rows() == 31);
  REQUIRE(A.cols() == 31);
  CHECK(h.mesh.interior_nodes() == 31);
  CHECK(h.mesh.step() == 1.0 / 32.0);
  for (std::size_t i = 0; i < 31; ++i) {
    CHECK(A(i, i) == 2048.0);
    for (std::size_t j = 0; j < 31; ++j) {
      const double expect = i == j ? 2048.0 : (i + 1 == j || j + 1 == i ? -1024.0 : 0.0);
      CHECK(A(i, j) == expect);
    }
  }
  CHECK((A - A.transpose()).max_abs() == 0.0);
  for (double v : h.problem.y0()) CHECK(v == 0.0);
  // x = 0.5 is interior node 16 (index 15)
  CHECK(h.problem.target(1.0)[15] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(h.problem.target(0.0)[15] == 0.0);
}

TEST_CASE("heat problem on the smallest mesh") {
  const HeatProblem h = heat_problem_1d(1.0, 2, 1.0, 0.0, 1.0, [](double, double) { return 0.0; });
  REQUIRE(h.problem.dim() == 1);
  CHECK(h.problem.A()(0, 0) == 8.0);
  CHECK_THROWS_AS(heat_problem_1d(1.0, 1, 1.0, 0.0, 1.0, [](double, double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("time grid nodes") {
  const TimeGrid g(0.0, 1.0, 32);
  CHECK(g.nodes() == 33);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(32) == 1.0);
  for (std::size_t m = 1; m < g.nodes(); ++m) CHECK(g.node(m) > g.node(m - 1));
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("decomposition requires alpha on an interior node") {
  const TimeGrid g(0.0, 1.0, 32);
  const Decomposition d = Decomposition::split(g, 13.0 / 32.0);
  CHECK(d.interface_node() == 13);
  CHECK(d.grid1().t_end() == d.alpha());
  CHECK(d.grid2().t_start() == d.alpha());
  CHECK(d.grid1().step() == doctest::Approx(g.step()).epsilon(1e-15));
  CHECK(d.grid2().step() == doctest::Approx(g.step()).epsilon(1e-15));
  CHECK(d.grid1().intervals() + d.grid2().intervals() == 32);

  const double h = g.step();
  CHECK_NOTHROW(Decomposition::split(g, 13.0 * h + 0.4e-9 * h));
  CHECK_THROWS_AS(Decomposition::split(g, 13.0 * h + 0.6e-9 * h), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition::split(g, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition::split(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition::split(g, 1.0), std::invalid_argument);
  CHECK_NOTHROW(Decomposition::split(TimeGrid(0.0, 1.0, 10), 0.4));
}

TEST_CASE("transmission table") {
  using K = InterfaceKind;
  CHECK(transmission_table(Variant::SD1) == TransmissionSpec{K::AdjointValue, K::StateValue});
  CHECK(transmission_table(Variant::SD2) == TransmissionSpec{K::StateValue, K::AdjointValue});
  CHECK(transmission_table(Variant::SD3) == TransmissionSpec{K::StateValue, K::StateValue});
  CHECK(transmission_table(Variant::SD4) == TransmissionSpec{K::AdjointValue, K::AdjointValue});
  CHECK(transmission_table(Variant::SN1) ==
        TransmissionSpec{K::AdjointDerivative, K::StateDerivative});
  CHECK(transmission_table(Variant::SN2) ==
        TransmissionSpec{K::StateDerivative, K::AdjointDerivative});
  CHECK(transmission_table(Variant::SN3) ==
        TransmissionSpec{K::StateDerivative, K::StateDerivative});
  CHECK(transmission_table(Variant::SN4) ==
        TransmissionSpec{K::AdjointDerivative, K::AdjointDerivative});

  std::set<std::pair<int, int>> seen;
  for (Variant v : kAllVariants) {
    const TransmissionSpec s = transmission_table(v);
    seen.insert({static_cast<int>(s.at_I1), static_cast<int>(s.at_I2)});
    CHECK(is_derivative(s.at_I1) == is_neumann(v));
    CHECK(is_derivative(s.at_I2) == is_neumann(v));
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("variant names round trip") {
  for (Variant v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
  CHECK(parse_variant("sn3") == Variant::SN3);
  CHECK_THROWS_AS(parse_variant("SD5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant(""), std::invalid_argument);
}

TEST_CASE("recover_control scales the adjoint") {
  const TimeGrid g(0.0, 1.0, 2);
  Trajectory t{g, {{0.0}, {0.0}, {0.0}}, {{0.0}, {2.0}, {-1.0}}};
  const auto u = recover_control(t, 0.5);
  REQUIRE(u.size() == 3);
  CHECK(u[0][0] == 0.0);
  CHECK(u[1][0] == 4.0);
  CHECK(u[2][0] == -2.0);
  CHECK_THROWS_AS(recover_control(t, 0.0), std::invalid_argument);
}
