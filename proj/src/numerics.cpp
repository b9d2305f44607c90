#include "isingcorr/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace isingcorr {

ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Complex(m(i, j), 0.0);
  return out;
}

RealMatrix real_part_checked(const ComplexMatrix& m, double eps) {
  const double scale = std::max(m.max_abs(), 1.0);
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (std::abs(z.imag()) > eps * scale)
        throw Error("residual-imaginary",
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") has imaginary part " + std::to_string(z.imag()));
      out(i, j) = z.real();
    }
  return out;
}

template <typename T>
Matrix<T> lu_solve(Matrix<T> a, Matrix<T> b, const TolerancePolicy& policy) {
  if (a.rows() != a.cols()) throw Error("shape-mismatch", "lu_solve needs a square matrix");
  if (a.rows() != b.rows()) throw Error("shape-mismatch", "lu_solve rhs row count");
  const std::size_t n = a.rows();
  const double threshold = policy.solve_eps * std::max(a.max_abs(), 1e-300);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > best) best = std::abs(a(r, col)), pivot = r;
    if (best <= threshold)
      throw Error("singular", "pivot " + std::to_string(best) + " at column " +
                                  std::to_string(col));
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(pivot, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a(r, col) / a(col, col);
      if (f == T{}) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= f * b(col, j);
    }
  }
  // back substitution
  for (std::size_t ri = n; ri-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = b(ri, j);
      for (std::size_t k = ri + 1; k < n; ++k) acc -= a(ri, k) * b(k, j);
      b(ri, j) = acc / a(ri, ri);
    }
  }
  return b;
}

template RealMatrix lu_solve<double>(RealMatrix, RealMatrix, const TolerancePolicy&);
template ComplexMatrix lu_solve<Complex>(ComplexMatrix, ComplexMatrix, const TolerancePolicy&);

template <typename T>
std::size_t rank(Matrix<T> m, const TolerancePolicy& policy) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const double threshold = policy.solve_eps * std::max(m.max_abs(), 1e-300);
  std::size_t rk = 0;
  for (std::size_t col = 0; col < cols && rk < rows; ++col) {
    std::size_t pivot = rk;
    double best = std::abs(m(rk, col));
    for (std::size_t r = rk + 1; r < rows; ++r)
      if (std::abs(m(r, col)) > best) best = std::abs(m(r, col)), pivot = r;
    if (best <= threshold) continue;
    if (pivot != rk)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(rk, j), m(pivot, j));
    for (std::size_t r = rk + 1; r < rows; ++r) {
      const T f = m(r, col) / m(rk, col);
      if (f == T{}) continue;
      for (std::size_t j = col; j < cols; ++j) m(r, j) -= f * m(rk, j);
    }
    ++rk;
  }
  return rk;
}

template std::size_t rank<double>(RealMatrix, const TolerancePolicy&);
template std::size_t rank<Complex>(ComplexMatrix, const TolerancePolicy&);

namespace {

// Modified Gram-Schmidt on the rows; drops rows with relative norm below tol.
std::vector<std::vector<Complex>> orthonormal_rows(const ComplexMatrix& m,
                                                   double tol = 1e-12) {
  std::vector<std::vector<Complex>> basis;
  const double scale = std::max(m.max_abs(), 1e-300);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Complex> v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        Complex dot{};
        for (std::size_t j = 0; j < v.size(); ++j) dot += std::conj(q[j]) * v[j];
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= dot * q[j];
      }
    double norm = 0.0;
    for (const Complex& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    if (norm <= tol * scale * std::sqrt(double(m.cols()))) continue;
    for (Complex& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

double one_sided_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto basis = orthonormal_rows(a);
  double worst = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    std::vector<Complex> v(b.cols());
    double norm = 0.0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      v[j] = b(i, j);
      norm += std::norm(v[j]);
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (const auto& q : basis) {
      Complex dot{};
      for (std::size_t j = 0; j < v.size(); ++j) dot += std::conj(q[j]) * v[j];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= dot * q[j];
    }
    double res = 0.0;
    for (const Complex& x : v) res += std::norm(x);
    worst = std::max(worst, std::sqrt(res) / norm);
  }
  return worst;
}

}  // namespace

double span_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) throw Error("shape-mismatch", "span_residual column count");
  return std::max(one_sided_residual(a, b), one_sided_residual(b, a));
}

double span_residual(const RealMatrix& a, const RealMatrix& b) {
  return span_residual(to_complex(a), to_complex(b));
}

}  // namespace isingcorr
