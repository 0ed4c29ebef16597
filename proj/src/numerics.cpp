#include "tschwarz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace tschwarz {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument(fmt::format("DenseMatrix: {} entries given for a {}x{} matrix",
                                            data_.size(), rows_, cols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector DenseMatrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::apply: size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vector DenseMatrix::apply_transpose(std::span<const double> x) const {
  if (x.size() != rows_) throw std::invalid_argument("DenseMatrix::apply_transpose: size mismatch");
  Vector y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) y[j] += (*this)(i, j) * x[i];
  return y;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    m = std::max(m, s);
  }
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shapes differ");
  std::vector<double> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(e));
}

BandedMatrix::BandedMatrix(std::size_t dim, std::size_t lower, std::size_t upper)
    : dim_(dim), lower_(lower), upper_(upper), width_(lower + upper + 1) {
  if (dim == 0) throw std::invalid_argument("BandedMatrix: dimension must be positive");
  if (lower >= dim && dim > 1) throw std::invalid_argument("BandedMatrix: lower bandwidth >= dim");
  if (upper >= dim && dim > 1) throw std::invalid_argument("BandedMatrix: upper bandwidth >= dim");
  band_.assign(dim_ * width_, 0.0);
}

double& BandedMatrix::operator()(std::size_t i, std::size_t j) {
  if (!in_band(i, j)) {
    throw std::out_of_range(fmt::format("BandedMatrix: ({}, {}) outside band [{}, {}]", i, j,
                                        lower_, upper_));
  }
  return band_[i * width_ + (j + lower_ - i)];
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) return 0.0;
  return band_[i * width_ + (j + lower_ - i)];
}

Vector BandedMatrix::apply(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("BandedMatrix::apply: size mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = i > lower_ ? i - lower_ : 0;
    const std::size_t j1 = std::min(dim_ - 1, i + upper_);
    double s = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix BandedMatrix::to_dense() const {
  DenseMatrix d(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) d(i, j) = (*this)(i, j);
  return d;
}

double BandedMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < width_; ++k) s += std::abs(band_[i * width_ + k]);
    m = std::max(m, s);
  }
  return m;
}

namespace {

void check_pivot(double pivot, double row_scale, std::size_t k) {
  if (!(std::abs(pivot) >= kPivotThreshold * row_scale) || row_scale == 0.0) {
    throw SingularMatrixError(
        fmt::format("singular to working precision at column {} (pivot {:.3e}, row scale {:.3e})",
                    k, pivot, row_scale));
  }
}

}  // namespace

Vector lu_solve(const DenseMatrix& m, std::span<const double> b) {
  if (!m.square()) throw std::invalid_argument("lu_solve: matrix is not square");
  const std::size_t n = m.rows();
  if (b.size() != n) throw std::invalid_argument("lu_solve: rhs size mismatch");

  DenseMatrix a = m;
  Vector x(b.begin(), b.end());
  Vector scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s = std::max(s, std::abs(v));
    scale[i] = s;
  }

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
    check_pivot(a(p, k), scale[p], k);
    if (p != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a(k, c), a(p, c));
      std::swap(x[k], x[p]);
      std::swap(scale[k], scale[p]);
    }
    const double pivot = a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double l = a(r, k) / pivot;
      if (l == 0.0) continue;
      a(r, k) = 0.0;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= l * a(k, c);
      x[r] -= l * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * x[c];
    x[k] = s / a(k, k);
  }
  return x;
}

BandedLU::BandedLU(const BandedMatrix& m)
    : n_(m.dim()),
      bl_(m.lower()),
      bu_(m.upper()),
      width_(2 * m.lower() + m.upper() + 1),
      u_(m.dim() * width_, 0.0),
      l_(m.dim() * m.lower(), 0.0),
      pivots_(m.dim()) {
  // Row r of the work array keeps columns [r - bl, r + bl + bu].
  auto at = [&](std::size_t r, std::size_t c) -> double& { return u_[r * width_ + (c + bl_ - r)]; };

  Vector scale(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t c0 = r > bl_ ? r - bl_ : 0;
    const std::size_t c1 = std::min(n_ - 1, r + bu_);
    for (std::size_t c = c0; c <= c1; ++c) {
      at(r, c) = m(r, c);
      scale[r] = std::max(scale[r], std::abs(m(r, c)));
    }
  }

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t rlast = std::min(n_ - 1, k + bl_);
    const std::size_t clast = std::min(n_ - 1, k + bl_ + bu_);
    std::size_t p = k;
    for (std::size_t r = k + 1; r <= rlast; ++r)
      if (std::abs(at(r, k)) > std::abs(at(p, k))) p = r;
    check_pivot(at(p, k), scale[p], k);
    pivots_[k] = p;
    if (p != k) {
      for (std::size_t c = k; c <= clast; ++c) std::swap(at(k, c), at(p, c));
      std::swap(scale[k], scale[p]);
    }
    const double pivot = at(k, k);
    for (std::size_t r = k + 1; r <= rlast; ++r) {
      const double l = at(r, k) / pivot;
      l_[k * bl_ + (r - k - 1)] = l;
      if (l == 0.0) continue;
      at(r, k) = 0.0;
      for (std::size_t c = k + 1; c <= clast; ++c) at(r, c) -= l * at(k, c);
    }
  }
}

Vector BandedLU::solve(std::span<const double> b) const {
  if (b.size() != n_) throw std::invalid_argument("BandedLU::solve: rhs size mismatch");
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n_; ++k) {
    if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    const std::size_t rlast = std::min(n_ - 1, k + bl_);
    for (std::size_t r = k + 1; r <= rlast; ++r) x[r] -= l_[k * bl_ + (r - k - 1)] * x[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t clast = std::min(n_ - 1, k + bl_ + bu_);
    const double* row = u_.data() + k * width_ + bl_ - k;
    double s = x[k];
    for (std::size_t c = k + 1; c <= clast; ++c) s -= row[c] * x[c];
    x[k] = s / row[k];
  }
  return x;
}

Vector BandedLU::solve_refined(const BandedMatrix& m, std::span<const double> b,
                               int steps) const {
  Vector x = solve(b);
  Vector r(n_);
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i > bl_ ? i - bl_ : 0;
      const std::size_t j1 = std::min(n_ - 1, i + bu_);
      long double acc = b[i];
      for (std::size_t j = j0; j <= j1; ++j)
        acc -= static_cast<long double>(m(i, j)) * static_cast<long double>(x[j]);
      r[i] = static_cast<double>(acc);
    }
    const Vector dx = solve(r);
    for (std::size_t i = 0; i < n_; ++i) x[i] += dx[i];
  }
  return x;
}

Vector banded_solve(const BandedMatrix& m, std::span<const double> b) {
  if (b.size() != m.dim()) throw std::invalid_argument("banded_solve: rhs size mismatch");
  return BandedLU(m).solve(b);
}

EigenDecomposition sym_eigen(const DenseMatrix& input) {
  if (!input.square()) throw std::invalid_argument("sym_eigen: matrix is not square");
  const std::size_t n = input.rows();
  const double amax = input.max_abs();
  if ((input - input.transpose()).max_abs() > 1e-12 * amax) {
    throw std::invalid_argument("sym_eigen: matrix is not symmetric");
  }

  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  double frob = 0.0;
  for (double e : a.entries()) frob += e * e;
  frob = std::sqrt(frob);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-12 * frob) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm_2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace tschwarz
