#pragma once

#include <optional>
#include <vector>

#include "isingcorr/curve.hpp"
#include "isingcorr/numerics.hpp"
#include "isingcorr/region.hpp"

namespace isingcorr {

/// Symmetric n x n matrix of boundary spin correlations, ones on the
/// diagonal, entries in [-1, 1].
struct CorrelationMatrix {
  RealMatrix entries;
  int n() const noexcept { return static_cast<int>(entries.rows()); }
  double operator()(int j, int k) const {
    return entries(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1));
  }
};

/// The n x 2n sign-twisted double of a correlation matrix. Its row span is
/// the subspace the curve bases reproduce; times k_matrix(n) it gives the
/// identity.
struct DoubledMatrix {
  RealMatrix entries;
  int n() const noexcept { return static_cast<int>(entries.rows()); }
};

/// 2n x n matrix with entries (2j-1, j) = (2j, j) = 1/2, zero elsewhere.
RealMatrix k_matrix(int n);

/// Column-doubling with alternating signs: row j gets 1, 1 in columns
/// 2j-1, 2j and +-(-1)^(j+k+[j<k]) m_jk in columns 2k-1, 2k.
DoubledMatrix double_correlations(const CorrelationMatrix& m);

/// Inverse of the doubling: m_jk = (-1)^(k-j+1) b_{j,2k-1} for j < k,
/// cross-checked against the (k,j) read; the two reads are averaged and the
/// worst discrepancy is reported through max_read_discrepancy when given.
/// Throws "sign-pattern" or "asymmetric" when the layout is violated.
CorrelationMatrix extract_correlations(const DoubledMatrix& b,
                                       const TolerancePolicy& policy = {},
                                       double* max_read_discrepancy = nullptr);

/// B = (A K_n)^(-1) A for any basis A of the correlation subspace. Real up
/// to the residual tolerance even for complex A. Throws "singular-product"
/// when A K_n is not invertible (the rows do not span a valid subspace) and
/// "residual-imaginary" when the result fails to be real.
DoubledMatrix doubled_from_span(const SpanBasis& basis, const TolerancePolicy& policy = {});

enum class BasisStrategy { automatic, fourier, samples, derivative, recursive };

/// End-to-end pipeline: pick a basis (automatic = fourier when the samples
/// span, derivative for alternating regions), form B, extract correlations.
/// Handles every valid region, including disconnected matchings, where
/// correlations across independent components come out zero.
CorrelationMatrix correlations(const Region& r,
                               BasisStrategy strategy = BasisStrategy::automatic,
                               const TolerancePolicy& policy = {});

/// The 2n x 2n crossing-removal operator at a descent k: identity outside
/// a 2x2 block (1/c, s/c; s/c, 1/c) at rows/columns k, k+1, where s, c are
/// the sine/cosine of theta~_{k+1} - theta~_k; for k = 2n the block wraps
/// around the corner with an extra (-1)^(n-1) on the off-diagonal entries.
struct GMatrix {
  RealMatrix entries;
  int k = 0;
};
GMatrix g_matrix(const Region& r, int k);

/// Basis built by repeatedly removing a descent and accumulating g-matrices
/// down to a non-crossing matching, whose span is spanned by
/// e_j + eps e_tau(j) with eps = (-1)^((tau(j)-j-1)/2). Requires a
/// non-alternating region. Independent of the curve-based bases.
SpanBasis recursive_basis(const Region& r);

/// Correlations through the descent-removal route; agrees with
/// correlations() on every non-alternating region.
CorrelationMatrix correlations_recursive(const Region& r, const TolerancePolicy& policy = {});

/// Closed form for the regular 2n-gon: with k = |p - q| (folded to
/// min(k, n-k), which leaves the value unchanged), the correlation is
/// (2/n) (1/sin((2k-1)pi/2n) - 1/sin((2k-3)pi/2n) + ... +- 1/sin(pi/2n)) -+ 1.
double regular_correlation(int n, int p, int q);

/// The same alternating sum without folding k; used to exercise the
/// k <-> n-k symmetry directly.
double regular_correlation_unfolded(int n, int k);

/// Scaling limit of n <sigma_1 sigma_(nx)> for the regular polygons:
/// 1 / sin(pi x) on 0 < x < 1. Throws "domain" outside.
double scaling_limit(double x);

/// Cyclic relabeling operator on row vectors:
/// (x_1, ..., x_2n) -> ((-1)^(n-1) x_2n, x_1, ..., x_2n-1).
RealMatrix cyclic_shift_matrix(int n);

}  // namespace isingcorr
