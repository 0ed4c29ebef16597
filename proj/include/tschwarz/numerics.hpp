#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tschwarz {

using Vector = std::vector<double>;

/// Raised when elimination meets a pivot below the relative singularity threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Pivots smaller than this fraction of the row magnitude are treated as zero.
inline constexpr double kPivotThreshold = 1e-14;

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& entries() const { return data_; }

  DenseMatrix transpose() const;
  Vector apply(std::span<const double> x) const;
  Vector apply_transpose(std::span<const double> x) const;

  /// Largest absolute entry.
  double max_abs() const;
  /// Induced infinity norm (max row sum).
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// Square matrix with `lower` sub- and `upper` super-diagonals. Entries outside
/// the band read as zero and cannot be written.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t dim, std::size_t lower, std::size_t upper);

  std::size_t dim() const { return dim_; }
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + lower_ >= i && j <= i + upper_;
  }
  double& operator()(std::size_t i, std::size_t j);
  double operator()(std::size_t i, std::size_t j) const;

  Vector apply(std::span<const double> x) const;
  DenseMatrix to_dense() const;
  double norm_inf() const;

 private:
  std::size_t dim_;
  std::size_t lower_;
  std::size_t upper_;
  std::size_t width_;
  std::vector<double> band_;
};

/// LU with partial pivoting on a copy of `m`.
Vector lu_solve(const DenseMatrix& m, std::span<const double> b);

/// Band LU factors with partial pivoting. Fill from row interchanges is kept
/// within lower + upper super-diagonals of U.
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& m);

  Vector solve(std::span<const double> b) const;
  /// solve() followed by `steps` rounds of iterative refinement with the
  /// residual accumulated in long double.
  Vector solve_refined(const BandedMatrix& m, std::span<const double> b, int steps = 2) const;

 private:
  std::size_t n_;
  std::size_t bl_;
  std::size_t bu_;
  std::size_t width_;
  std::vector<double> u_;    // rows of U, width 2*bl + bu + 1
  std::vector<double> l_;    // bl multipliers per column
  std::vector<std::size_t> pivots_;
};

Vector banded_solve(const BandedMatrix& m, std::span<const double> b);

/// Orthogonal diagonalization A = P diag(d) P^T of a symmetric matrix.
struct EigenDecomposition {
  Vector eigenvalues;       ///< ascending
  DenseMatrix eigenvectors; ///< column j pairs with eigenvalues[j]
};

/// Cyclic Jacobi rotations; stops once the off-diagonal Frobenius norm drops
/// below 1e-12 * ||A||_F or after 100 sweeps.
EigenDecomposition sym_eigen(const DenseMatrix& a);

double norm_inf(std::span<const double> x);
double norm_2(std::span<const double> x);

}  // namespace tschwarz
