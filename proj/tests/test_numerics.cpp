#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tschwarz/numerics.hpp"

using namespace tschwarz;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

DenseMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = uniform(rng, -1.0, 1.0);
  return a;
}

double residual_ratio(const DenseMatrix& m, const Vector& x, const Vector& b) {
  const Vector mx = m.apply(x);
  double r = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) r = std::max(r, std::abs(mx[i] - b[i]));
  return r / (m.norm_inf() * norm_inf(x) + norm_inf(b));
}

DenseMatrix laplacian(std::size_t n, double h) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0 / (h * h);
    if (i > 0) a(i, i - 1) = -1.0 / (h * h);
    if (i + 1 < n) a(i, i + 1) = -1.0 / (h * h);
  }
  return a;
}

}  // namespace

TEST_CASE("lu_solve on small systems") {
  const Vector b{1.0, -2.0, 3.5};
  CHECK(lu_solve(DenseMatrix::identity(3), b) == b);
  const Vector x = lu_solve(DenseMatrix(2, 2, {2.0, 0.0, 0.0, 4.0}), Vector{2.0, 8.0});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  // needs a row swap
  const Vector y = lu_solve(DenseMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}), Vector{3.0, 4.0});
  CHECK(y[0] == 4.0);
  CHECK(y[1] == 3.0);
}

TEST_CASE("lu_solve residual on random well-conditioned systems") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix m(50, 50);
    for (std::size_t i = 0; i < 50; ++i)
      for (std::size_t j = 0; j < 50; ++j) m(i, j) = uniform(rng, -1.0, 1.0) + (i == j ? 50.0 : 0.0);
    Vector b(50);
    for (double& v : b) v = uniform(rng, -1.0, 1.0);
    CHECK(residual_ratio(m, lu_solve(m, b), b) <= 1e-10);
  }
}

TEST_CASE("lu_solve rejects singular and malformed input") {
  CHECK_THROWS_AS(lu_solve(DenseMatrix(2, 2, {1.0, 2.0, 2.0, 4.0}), Vector{1.0, 1.0}),
                  SingularMatrixError);
  CHECK_THROWS_AS(lu_solve(DenseMatrix(2, 2, 0.0), Vector{1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(lu_solve(DenseMatrix(2, 3, 1.0), Vector{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(lu_solve(DenseMatrix::identity(2), Vector{1.0}), std::invalid_argument);
}

TEST_CASE("banded matrix storage") {
  BandedMatrix m(5, 1, 2);
  CHECK(m.in_band(3, 2));
  CHECK(m.in_band(1, 3));
  CHECK_FALSE(m.in_band(3, 1));
  CHECK_FALSE(m.in_band(0, 3));
  m(2, 4) = 7.0;
  const BandedMatrix& cm = m;
  CHECK(cm(2, 4) == 7.0);
  CHECK(cm(4, 0) == 0.0);
  CHECK_THROWS_AS(m(4, 0) = 1.0, std::out_of_range);
  CHECK(m.to_dense()(2, 4) == 7.0);
}

TEST_CASE("banded_solve matches the dense solve on tridiag(-1, 2, -1)") {
  for (std::size_t n : {2u, 7u, 31u, 100u}) {
    BandedMatrix m(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 2.0;
      if (i > 0) m(i, i - 1) = -1.0;
      if (i + 1 < n) m(i, i + 1) = -1.0;
    }
    const Vector b(n, 1.0);
    const Vector xb = banded_solve(m, b);
    const Vector xd = lu_solve(m.to_dense(), b);
    // exact: x_i = (i+1)(n-i)/2
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(xb[i] - xd[i]) <= 1e-12 * norm_inf(xd));
      CHECK(xb[i] == doctest::Approx((i + 1.0) * (n - i) / 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("banded_solve edge cases") {
  BandedMatrix one(1, 0, 0);
  one(0, 0) = 4.0;
  CHECK(banded_solve(one, Vector{2.0})[0] == 0.5);

  BandedMatrix sing(3, 1, 1);
  sing(0, 0) = 1.0;
  sing(0, 1) = 1.0;
  sing(1, 0) = 1.0;
  sing(1, 1) = 1.0;
  sing(2, 2) = 1.0;
  CHECK_THROWS_AS(banded_solve(sing, Vector{1.0, 1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(banded_solve(BandedMatrix(3, 1, 1), Vector{1.0, 1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(BandedMatrix(3, 3, 0), std::invalid_argument);
}

TEST_CASE("banded and dense solves agree on random banded systems needing pivoting") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial * 3;
    const std::size_t bl = 1 + trial % 4, bu = 1 + (trial / 2) % 5;
    if (bl >= n || bu >= n) continue;
    BandedMatrix m(n, bl, bu);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m.in_band(i, j)) m(i, j) = uniform(rng, -1.0, 1.0);
    Vector b(n);
    for (double& v : b) v = uniform(rng, -1.0, 1.0);
    const Vector xb = banded_solve(m, b);
    const Vector xd = lu_solve(m.to_dense(), b);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(xb[i] - xd[i]));
    CHECK(diff <= 1e-10 * norm_inf(xd));
    CHECK(residual_ratio(m.to_dense(), xb, b) <= 1e-10);

    const BandedLU lu(m);
    const Vector xr = lu.solve_refined(m, b);
    CHECK(residual_ratio(m.to_dense(), xr, b) <= residual_ratio(m.to_dense(), xb, b) + 1e-16);
  }
}

TEST_CASE("sym_eigen on a diagonal matrix") {
  const EigenDecomposition e = sym_eigen(DenseMatrix::diagonal(Vector{3.0, 1.0, 2.0}));
  CHECK(e.eigenvalues == Vector{1.0, 2.0, 3.0});
  // columns are signed unit vectors e2, e3, e1
  CHECK(std::abs(e.eigenvectors(1, 0)) == 1.0);
  CHECK(std::abs(e.eigenvectors(2, 1)) == 1.0);
  CHECK(std::abs(e.eigenvectors(0, 2)) == 1.0);
}

TEST_CASE("sym_eigen reproduces the finite-difference Laplacian spectrum") {
  const double h = 1.0 / 32.0;
  const EigenDecomposition e = sym_eigen(laplacian(31, h));
  const std::vector<double> exact = oracle::fd_laplacian_spectrum(1.0, 32);
  REQUIRE(e.eigenvalues.size() == 31);
  CHECK(std::abs(e.eigenvalues.front() - 9.8617) <= 1e-3);
  CHECK(std::abs(e.eigenvalues.back() - 4086.1) <= 0.1);
  for (std::size_t k = 0; k < 31; ++k)
    CHECK(std::abs(e.eigenvalues[k] - exact[k]) <= 1e-9 * exact.back());
}

TEST_CASE("sym_eigen reconstruction on random symmetric matrices") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u, 64u}) {
    const DenseMatrix a = random_symmetric(rng, n);
    const EigenDecomposition e = sym_eigen(a);
    const DenseMatrix& P = e.eigenvectors;
    const DenseMatrix D = DenseMatrix::diagonal(e.eigenvalues);
    CHECK((P.transpose() * P - DenseMatrix::identity(n)).max_abs() <= 1e-10);
    CHECK((a * P - P * D).max_abs() <= 1e-8 * a.max_abs());
    CHECK((P * D * P.transpose() - a).max_abs() <= 1e-8 * a.max_abs());
    for (std::size_t k = 1; k < n; ++k) CHECK(e.eigenvalues[k - 1] <= e.eigenvalues[k]);
  }
}

TEST_CASE("sym_eigen rejects asymmetric input") {
  CHECK_THROWS_AS(sym_eigen(DenseMatrix(2, 2, {1.0, 2.0, 2.1, 1.0})), std::invalid_argument);
  CHECK_THROWS_AS(sym_eigen(DenseMatrix(2, 3, 1.0)), std::invalid_argument);
  CHECK_NOTHROW(sym_eigen(DenseMatrix(2, 2, {1.0, 2.0, 2.0 + 1e-13, 1.0})));
}

TEST_CASE("vector norms") {
  const Vector v{3.0, -4.0};
  CHECK(norm_inf(v) == 4.0);
  CHECK(norm_2(v) == 5.0);
  CHECK(norm_inf(Vector{}) == 0.0);
}
