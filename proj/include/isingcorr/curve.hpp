#pragma once

#include <vector>

#include "isingcorr/numerics.hpp"
#include "isingcorr/region.hpp"

namespace isingcorr {

/// How the rows of a span basis were produced.
enum class BasisKind { fourier, samples, derivative, noncrossing_recursive };

/// An n x 2n matrix whose complex row span represents the region's
/// correlation subspace. Conjugation-invariant by construction, so real
/// data can be recovered from it downstream.
struct SpanBasis {
  ComplexMatrix rows;
  BasisKind kind = BasisKind::fourier;
};

/// The boundary curve at parameter t: coordinate k is the product of
/// sin(t - theta~_j) over the affine index set of k. Each coordinate is a
/// trigonometric polynomial of degree n-1.
std::vector<double> gamma(const Region& r, double t);

/// Same values through the finite-index formula with its explicit sign
/// prefix (-1)^{#{j in J_k : j <= k}}; agrees with gamma() identically.
std::vector<double> gamma_finite(const Region& r, double t);

/// Affine evaluation at arbitrary integer coordinates; coordinate k + 2n
/// equals (-1)^(n-1) times coordinate k.
double gamma_coordinate(const Region& r, long k, double t);

/// Complexified curve: coordinate k is the product of (T - v_j) / T_j over
/// the affine index set. Satisfies Gamma(T^2) = (2iT)^(n-1) gamma(t) for
/// T = exp(it), so it spans the same subspace.
std::vector<Complex> gamma_complex(const Region& r, Complex T);

/// Coefficient table of the complexified curve: row k holds the n
/// polynomial coefficients of coordinate k (degree <= n-1), built by
/// incremental multiplication of linear factors.
ComplexMatrix gamma_complex_coefficients(const Region& r);

/// Fourier coefficient matrix F (n x 2n): entry (j,k) is the (j-1)-th
/// elementary symmetric polynomial of the squared half-directions over the
/// affine index set of k, divided by the product of the half-directions.
/// A constant per-row factor from the sine expansion is dropped; it does
/// not change the row span. Rank n iff the region is non-alternating.
ComplexMatrix fourier_matrix(const Region& r);
SpanBasis fourier_basis(const Region& r);

/// Equispaced default sample points (2m-1) pi / 2n, m = 1..n.
std::vector<double> default_sample_points(int n);

/// Basis from n curve points gamma(t_1) .. gamma(t_n). Requires strictly
/// increasing t in [0, pi) ("bad-sample-points") and a non-alternating
/// region; throws "rank-deficient" when the points do not span.
SpanBasis sample_basis(const Region& r, const std::vector<double>& ts,
                       const TolerancePolicy& policy = {});

/// Multiplicity m_k: how many indices of the j-set share the direction of
/// k; the vanishing order of coordinate k of the complexified curve at v_k.
int multiplicity(const Region& r, int k);

/// Cyclic interval {k, ..., tau(k)} inclusive. An index j lies outside
/// exactly when k belongs to the j-set of j.
std::vector<int> support(const Matching& m, int k);

/// Basis valid for every region, alternating or not: for each j in the
/// j-set of k plus k itself, take the m_j-fold derivative of the
/// complexified curve at v_j and zero the coordinates outside the support
/// of j. The submatrix on those columns is triangular with nonzero
/// diagonal, so the rows always span.
SpanBasis derivative_basis(const Region& r, int k = 1);

}  // namespace isingcorr
