#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace survtest {

/// Dense symmetric matrix. Both triangles are stored; writes go through
/// set(), which keeps them equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}
  /// From a row-major dim x dim array; the upper triangle is authoritative.
  /// Throws InputError on non-finite entries or a size mismatch.
  SymMatrix(std::size_t dim, std::span<const double> row_major);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, double v) { set(i, j, (*this)(i, j) + v); }

  /// Leading principal k x k block.
  SymMatrix leading(std::size_t k) const;
  double trace() const;
  double frobenius_norm() const;
  std::span<const double> data() const { return data_; }

  bool operator==(const SymMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// All eigenvalues, sorted descending, by cyclic Jacobi rotations. Sweeps run
/// in row order until the off-diagonal Frobenius norm is below
/// 1e-12 * ||m||_F. Throws InputError on non-finite input or empty matrix.
std::vector<double> sym_eigenvalues(const SymMatrix& m);

struct SpdSolution {
  std::vector<double> x;
  /// lambda_min / lambda_max of the matrix.
  double rcond = 0.0;
};

/// Solves m x = b by Cholesky factorization. Throws DegenerateError("singular")
/// on factorization breakdown or when rcond < 1e-12.
SpdSolution spd_solve(const SymMatrix& m, std::span<const double> b);

/// Upper tail P[chi2_k > x] via the regularized incomplete gamma function.
double chisq_sf(double x, int k);

/// P[sum_s lambda_s chi2_{1,s} > x] by Imhof's inversion of the
/// characteristic function. All lambdas must be positive and finite.
double imhof_tail(std::span<const double> lambdas, double x);

}  // namespace survtest
