#include "isingcorr/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isingcorr {

namespace {
constexpr double kPi = std::numbers::pi;
}

double gamma_coordinate(const Region& r, long k, double t) {
  const int two_n = r.size();
  const int k0 = static_cast<int>(((k - 1) % two_n + two_n) % two_n) + 1;
  double prod = 1.0;
  for (long j : j_set_affine(r.matching(), k0)) prod *= std::sin(t - r.affine_theta(j));
  // shifting k by 2n shifts every theta~ by pi, flipping n-1 sine factors
  const long blocks = (k - k0) / two_n;
  if (((r.n() - 1) * blocks) % 2 != 0) prod = -prod;
  return prod;
}

std::vector<double> gamma(const Region& r, double t) {
  std::vector<double> out(static_cast<std::size_t>(r.size()));
  for (int k = 1; k <= r.size(); ++k)
    out[static_cast<std::size_t>(k - 1)] = gamma_coordinate(r, k, t);
  return out;
}

std::vector<double> gamma_finite(const Region& r, double t) {
  const int two_n = r.size();
  std::vector<double> out(static_cast<std::size_t>(two_n));
  for (int k = 1; k <= two_n; ++k) {
    double prod = 1.0;
    int sign_count = 0;
    for (int j : j_set(r.matching(), k)) {
      prod *= std::sin(t - r.theta(j));
      if (j <= k) ++sign_count;
    }
    out[static_cast<std::size_t>(k - 1)] = (sign_count % 2 == 0) ? prod : -prod;
  }
  return out;
}

std::vector<Complex> gamma_complex(const Region& r, Complex T) {
  const int two_n = r.size();
  std::vector<Complex> out(static_cast<std::size_t>(two_n));
  for (int k = 1; k <= two_n; ++k) {
    Complex prod{1.0, 0.0};
    for (long j : j_set_affine(r.matching(), k)) prod *= (T - r.v(j)) / r.half_direction(j);
    out[static_cast<std::size_t>(k - 1)] = prod;
  }
  return out;
}

ComplexMatrix gamma_complex_coefficients(const Region& r) {
  const int two_n = r.size();
  const int n = r.n();
  ComplexMatrix coeffs(static_cast<std::size_t>(two_n), static_cast<std::size_t>(n));
  for (int k = 1; k <= two_n; ++k) {
    std::vector<Complex> poly = {Complex{1.0, 0.0}};
    for (long j : j_set_affine(r.matching(), k)) {
      const Complex root = r.v(j);
      const Complex scale = Complex{1.0, 0.0} / r.half_direction(j);
      std::vector<Complex> next(poly.size() + 1);
      for (std::size_t d = 0; d < poly.size(); ++d) {
        next[d + 1] += poly[d] * scale;
        next[d] -= poly[d] * root * scale;
      }
      poly = std::move(next);
    }
    for (std::size_t d = 0; d < poly.size(); ++d) coeffs(static_cast<std::size_t>(k - 1), d) = poly[d];
  }
  return coeffs;
}

ComplexMatrix fourier_matrix(const Region& r) {
  const int two_n = r.size();
  const int n = r.n();
  ComplexMatrix f(static_cast<std::size_t>(n), static_cast<std::size_t>(two_n));
  for (int k = 1; k <= two_n; ++k) {
    // e[j] accumulates the j-th elementary symmetric polynomial of the
    // squared half-directions, one linear factor at a time
    std::vector<Complex> e(static_cast<std::size_t>(n), Complex{});
    e[0] = Complex{1.0, 0.0};
    Complex denom{1.0, 0.0};
    std::size_t filled = 0;
    for (long j : j_set_affine(r.matching(), k)) {
      const Complex Tj = r.half_direction(j);
      const Complex z = Tj * Tj;
      for (std::size_t d = std::min(filled + 1, static_cast<std::size_t>(n - 1)); d >= 1; --d)
        e[d] += z * e[d - 1];
      ++filled;
      denom *= Tj;
    }
    for (int j = 1; j <= n; ++j)
      f(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1)) =
          e[static_cast<std::size_t>(j - 1)] / denom;
  }
  return f;
}

SpanBasis fourier_basis(const Region& r) { return SpanBasis{fourier_matrix(r), BasisKind::fourier}; }

std::vector<double> default_sample_points(int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m)
    ts[static_cast<std::size_t>(m - 1)] = (2.0 * m - 1.0) * kPi / (2.0 * n);
  return ts;
}

SpanBasis sample_basis(const Region& r, const std::vector<double>& ts,
                       const TolerancePolicy& policy) {
  const int n = r.n();
  if (static_cast<int>(ts.size()) != n)
    throw Error("bad-sample-points", "need exactly n = " + std::to_string(n) + " sample points");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 0.0 || ts[i] >= kPi)
      throw Error("bad-sample-points", "sample points must lie in [0, pi)");
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw Error("bad-sample-points", "sample points must be strictly increasing");
  }
  ComplexMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(r.size()));
  for (int i = 0; i < n; ++i) {
    const auto row = gamma(r, ts[static_cast<std::size_t>(i)]);
    for (std::size_t j = 0; j < row.size(); ++j) a(static_cast<std::size_t>(i), j) = row[j];
  }
  if (rank(a, policy) < static_cast<std::size_t>(n))
    throw Error("rank-deficient",
                "curve samples do not span; the region is alternating or degenerate");
  return SpanBasis{std::move(a), BasisKind::samples};
}

int multiplicity(const Region& r, int k) {
  int count = 0;
  for (int j : j_set(r.matching(), k))
    if (r.same_direction(j, k)) ++count;
  return count;
}

std::vector<int> support(const Matching& m, int k) {
  const int two_n = m.size();
  if (k < 1 || k > two_n) throw Error("index-out-of-range", "k = " + std::to_string(k));
  std::vector<int> out;
  int i = k;
  while (true) {
    out.push_back(i);
    if (i == m.tau(k)) break;
    i = i % two_n + 1;
  }
  return out;
}

SpanBasis derivative_basis(const Region& r, int k) {
  const int two_n = r.size();
  const int n = r.n();
  if (k < 1 || k > two_n) throw Error("index-out-of-range", "k = " + std::to_string(k));
  const ComplexMatrix coeffs = gamma_complex_coefficients(r);

  std::vector<int> rows_for = j_set(r.matching(), k);
  rows_for.push_back(k);
  // cyclic order starting at k, matching the triangular structure
  std::sort(rows_for.begin(), rows_for.end(), [&](int a, int b) {
    return (a - k + two_n) % two_n < (b - k + two_n) % two_n;
  });

  ComplexMatrix basis(static_cast<std::size_t>(n), static_cast<std::size_t>(two_n));
  for (std::size_t row = 0; row < rows_for.size(); ++row) {
    const int j = rows_for[row];
    const int m_j = multiplicity(r, j);
    const Complex at = r.v(j);
    std::vector<bool> in_support(static_cast<std::size_t>(two_n) + 1, false);
    for (int s : support(r.matching(), j)) in_support[static_cast<std::size_t>(s)] = true;
    for (int i = 1; i <= two_n; ++i) {
      if (!in_support[static_cast<std::size_t>(i)]) continue;
      // m_j-fold derivative of coordinate i, evaluated at v_j
      Complex acc{};
      Complex power{1.0, 0.0};
      for (int d = m_j; d < n; ++d) {
        double fall = 1.0;
        for (int s = 0; s < m_j; ++s) fall *= static_cast<double>(d - s);
        acc += coeffs(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(d)) * fall * power;
        power *= at;
      }
      basis(row, static_cast<std::size_t>(i - 1)) = acc;
    }
  }
  return SpanBasis{std::move(basis), BasisKind::derivative};
}

}  // namespace isingcorr
