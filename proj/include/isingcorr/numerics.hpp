#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingcorr {

using Complex = std::complex<double>;

/// Error with a stable machine-readable code ("fixed-point", "singular", ...)
/// in addition to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Shared numeric thresholds, threaded through all modules.
struct TolerancePolicy {
  double angle_eps = 1e-9;      // direction / angle comparisons
  double solve_eps = 1e-12;     // pivot threshold, relative to max entry
  double residual_eps = 1e-9;   // admissible imaginary residue, span residuals
  double agreement_eps = 1e-9;  // cross-checks between computation paths
};

/// Dense row-major matrix over double or std::complex<double>.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<T>& data() const noexcept { return data_; }

  Matrix transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const T& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

template <typename A, typename B>
auto multiply(const Matrix<A>& a, const Matrix<B>& b)
    -> Matrix<decltype(A{} * B{})> {
  if (a.cols() != b.rows()) throw Error("shape-mismatch", "matrix product");
  Matrix<decltype(A{} * B{})> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const A aik = a(i, k);
      if (aik == A{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix to_complex(const RealMatrix& m);

/// Real part of a complex matrix; throws "residual-imaginary" if any entry
/// has imaginary part above eps * max|entry|.
RealMatrix real_part_checked(const ComplexMatrix& m, double eps);

/// Solve a * x = b by LU with partial pivoting. Throws "singular" when the
/// pivot falls below policy.solve_eps relative to the largest entry of a.
template <typename T>
Matrix<T> lu_solve(Matrix<T> a, Matrix<T> b,
                   const TolerancePolicy& policy = {});

/// Numerical rank via row-echelon elimination with column pivoting;
/// threshold is policy.solve_eps relative to the largest entry.
template <typename T>
std::size_t rank(Matrix<T> m, const TolerancePolicy& policy = {});

/// Symmetric row-span distance: orthonormalize the rows of one matrix and
/// measure the worst relative residual of the other's rows after projection,
/// in both directions. Zero iff the two row spans coincide.
double span_residual(const ComplexMatrix& a, const ComplexMatrix& b);
double span_residual(const RealMatrix& a, const RealMatrix& b);

}  // namespace isingcorr
