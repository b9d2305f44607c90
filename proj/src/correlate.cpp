#include "isingcorr/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isingcorr {

namespace {
constexpr double kPi = std::numbers::pi;
}

RealMatrix k_matrix(int n) {
  if (n < 1) throw Error("index-out-of-range", "n must be >= 1");
  RealMatrix k(static_cast<std::size_t>(2 * n), static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    k(static_cast<std::size_t>(2 * j - 2), static_cast<std::size_t>(j - 1)) = 0.5;
    k(static_cast<std::size_t>(2 * j - 1), static_cast<std::size_t>(j - 1)) = 0.5;
  }
  return k;
}

DoubledMatrix double_correlations(const CorrelationMatrix& m) {
  const int n = m.n();
  RealMatrix d(static_cast<std::size_t>(n), static_cast<std::size_t>(2 * n));
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      const std::size_t col = static_cast<std::size_t>(2 * k - 2);
      if (j == k) {
        d(static_cast<std::size_t>(j - 1), col) = 1.0;
        d(static_cast<std::size_t>(j - 1), col + 1) = 1.0;
      } else {
        const int sign = ((j + k + (j < k ? 1 : 0)) % 2 == 0) ? +1 : -1;
        const double value = sign * m(j, k);
        d(static_cast<std::size_t>(j - 1), col) = value;
        d(static_cast<std::size_t>(j - 1), col + 1) = -value;
      }
    }
  return DoubledMatrix{std::move(d)};
}

CorrelationMatrix extract_correlations(const DoubledMatrix& b, const TolerancePolicy& policy,
                                       double* max_read_discrepancy) {
  const int n = b.n();
  const RealMatrix& e = b.entries;
  if (static_cast<int>(e.cols()) != 2 * n) throw Error("shape-mismatch", "doubled matrix must be n x 2n");
  const double tol = policy.agreement_eps;

  auto at = [&](int j, int c) { return e(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(c - 1)); };

  for (int j = 1; j <= n; ++j) {
    if (std::abs(at(j, 2 * j - 1) - 1.0) > tol || std::abs(at(j, 2 * j) - 1.0) > tol)
      throw Error("sign-pattern", "diagonal double-column of row " + std::to_string(j) +
                                      " is not (1, 1)");
    for (int k = 1; k <= n; ++k) {
      if (k == j) continue;
      if (std::abs(at(j, 2 * k - 1) + at(j, 2 * k)) > tol)
        throw Error("sign-pattern", "columns " + std::to_string(2 * k - 1) + "," +
                                        std::to_string(2 * k) + " of row " + std::to_string(j) +
                                        " are not opposite");
    }
  }

  RealMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  double worst = 0.0;
  for (int j = 1; j <= n; ++j) {
    m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j - 1)) = 1.0;
    for (int k = j + 1; k <= n; ++k) {
      const int sgn1 = ((k - j + 1) % 2 == 0) ? +1 : -1;
      const int sgn2 = ((k - j) % 2 == 0) ? +1 : -1;
      const double read1 = sgn1 * at(j, 2 * k - 1);
      const double read2 = sgn2 * at(k, 2 * j - 1);
      worst = std::max(worst, std::abs(read1 - read2));
      if (std::abs(read1 - read2) > tol)
        throw Error("asymmetric", "reads for (" + std::to_string(j) + "," + std::to_string(k) +
                                      ") differ by " + std::to_string(read1 - read2));
      const double value = 0.5 * (read1 + read2);
      m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1)) = value;
      m(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(j - 1)) = value;
    }
  }
  if (max_read_discrepancy) *max_read_discrepancy = worst;
  return CorrelationMatrix{std::move(m)};
}

DoubledMatrix doubled_from_span(const SpanBasis& basis, const TolerancePolicy& policy) {
  const ComplexMatrix& a = basis.rows;
  const int n = static_cast<int>(a.rows());
  if (static_cast<int>(a.cols()) != 2 * n)
    throw Error("shape-mismatch", "span basis must be n x 2n");
  const ComplexMatrix ak = multiply(a, to_complex(k_matrix(n)));
  ComplexMatrix b;
  try {
    b = lu_solve(ak, a, policy);
  } catch (const Error& err) {
    if (err.code() == "singular")
      throw Error("singular-product",
                  "A K_n is not invertible; the rows do not span a correlation subspace");
    throw;
  }
  RealMatrix real_b;
  try {
    real_b = real_part_checked(b, policy.residual_eps);
  } catch (const Error& err) {
    if (err.code() == "residual-imaginary")
      throw Error("residual-imaginary",
                  "(A K_n)^(-1) A has an imaginary residue above tolerance");
    throw;
  }
  return DoubledMatrix{std::move(real_b)};
}

namespace {

SpanBasis pick_basis(const Region& r, BasisStrategy strategy, const TolerancePolicy& policy) {
  switch (strategy) {
    case BasisStrategy::fourier:
      return fourier_basis(r);
    case BasisStrategy::samples:
      return sample_basis(r, default_sample_points(r.n()), policy);
    case BasisStrategy::derivative:
      return derivative_basis(r);
    case BasisStrategy::recursive:
      return recursive_basis(r);
    case BasisStrategy::automatic:
      return is_alternating(r) ? derivative_basis(r) : fourier_basis(r);
  }
  throw Error("bad-strategy", "unknown basis strategy");
}

}  // namespace

CorrelationMatrix correlations(const Region& r, BasisStrategy strategy,
                               const TolerancePolicy& policy) {
  const SpanBasis basis = pick_basis(r, strategy, policy);
  return extract_correlations(doubled_from_span(basis, policy), policy);
}

GMatrix g_matrix(const Region& r, int k) {
  const int two_n = r.size();
  {
    const auto ds = descents(r);
    if (std::find(ds.begin(), ds.end(), k) == ds.end())
      throw Error("not-a-descent", "k = " + std::to_string(k));
  }
  const double delta = r.affine_theta(k + 1) - r.affine_theta(k);
  const double s = std::sin(delta), c = std::cos(delta);
  RealMatrix g = RealMatrix::identity(static_cast<std::size_t>(two_n));
  if (k < two_n) {
    g(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(k - 1)) = 1.0 / c;
    g(static_cast<std::size_t>(k), static_cast<std::size_t>(k)) = 1.0 / c;
    g(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(k)) = s / c;
    g(static_cast<std::size_t>(k), static_cast<std::size_t>(k - 1)) = s / c;
  } else {
    const double twist = (r.n() % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n-1)
    g(0, 0) = 1.0 / c;
    g(static_cast<std::size_t>(two_n - 1), static_cast<std::size_t>(two_n - 1)) = 1.0 / c;
    g(0, static_cast<std::size_t>(two_n - 1)) = twist * s / c;
    g(static_cast<std::size_t>(two_n - 1), 0) = twist * s / c;
  }
  return GMatrix{std::move(g), k};
}

namespace {

// Rows e_j + eps e_tau(j), one per pair, eps = (-1)^((tau(j)-j-1)/2).
RealMatrix noncrossing_span(const Region& r) {
  const int two_n = r.size();
  const int n = r.n();
  RealMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(two_n));
  std::size_t row = 0;
  for (int j = 1; j <= two_n; ++j) {
    const int t = r.tau(j);
    if (t < j) continue;
    const int eps = (((t - j - 1) / 2) % 2 == 0) ? +1 : -1;
    a(row, static_cast<std::size_t>(j - 1)) = 1.0;
    a(row, static_cast<std::size_t>(t - 1)) = static_cast<double>(eps);
    ++row;
  }
  return a;
}

}  // namespace

SpanBasis recursive_basis(const Region& r) {
  if (is_alternating(r))
    throw Error("rank-deficient", "the descent-removal route needs a non-alternating region");
  Region current = r;
  std::vector<GMatrix> stack;
  while (crossing_number(current.matching()) > 0) {
    const auto ds = descents(current);
    const int k = ds.front();
    stack.push_back(g_matrix(current, k));
    current = remove_crossing(current, k);
  }
  RealMatrix a = noncrossing_span(current);
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) a = multiply(a, it->entries);
  return SpanBasis{to_complex(a), BasisKind::noncrossing_recursive};
}

CorrelationMatrix correlations_recursive(const Region& r, const TolerancePolicy& policy) {
  return extract_correlations(doubled_from_span(recursive_basis(r), policy), policy);
}

double regular_correlation_unfolded(int n, int k) {
  if (n < 1) throw Error("index-out-of-range", "n must be >= 1");
  if (k < 0 || k > n) throw Error("index-out-of-range", "k must lie in [0, n]");
  if (k == 0 || k == n) return k == 0 ? 1.0 : regular_correlation_unfolded(n, 0);
  double sum = 0.0;
  int sign = +1;
  for (int i = k; i >= 1; --i) {  // terms 1/sin((2i-1)pi/2n), leading sign +
    sum += sign / std::sin((2.0 * i - 1.0) * kPi / (2.0 * n));
    sign = -sign;
  }
  const double tail = (k % 2 == 0) ? 1.0 : -1.0;  // -+ 1, opposite to last term
  return (2.0 / n) * sum + tail;
}

double regular_correlation(int n, int p, int q) {
  if (p < 1 || p > n || q < 1 || q > n)
    throw Error("index-out-of-range", "p, q must lie in [1, n]");
  int k = std::abs(p - q);
  k = std::min(k, n - k);  // the sum is invariant under k <-> n-k
  return regular_correlation_unfolded(n, k);
}

double scaling_limit(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error("domain", "x must lie in (0, 1)");
  return 1.0 / std::sin(kPi * x);
}

RealMatrix cyclic_shift_matrix(int n) {
  if (n < 1) throw Error("index-out-of-range", "n must be >= 1");
  const int two_n = 2 * n;
  RealMatrix s(static_cast<std::size_t>(two_n), static_cast<std::size_t>(two_n));
  for (int i = 1; i < two_n; ++i)
    s(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i)) = 1.0;
  s(static_cast<std::size_t>(two_n - 1), 0) = (n % 2 == 1) ? 1.0 : -1.0;
  return s;
}

}  // namespace isingcorr
