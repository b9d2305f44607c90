#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "isingcorr/numerics.hpp"

namespace isingcorr {

/// Fixed-point-free involution on {1..2n}, pairing opposite boundary edges.
/// Indices are 1-based throughout, matching the usual combinatorial
/// conventions for these pairings.
class Matching {
 public:
  /// Build from explicit index pairs; the pairs must partition {1..2n}.
  /// Throws "duplicate-index", "fixed-point" or "odd-size".
  static Matching from_pairs(const std::vector<std::pair<int, int>>& pairs);

  /// Build from the full pairing sequence tau(1..2n).
  static Matching from_pairing(const std::vector<int>& pairing);

  int n() const noexcept { return static_cast<int>(pairing_.size()) / 2; }
  int size() const noexcept { return static_cast<int>(pairing_.size()); }  // 2n

  int tau(int k) const { return pairing_[static_cast<std::size_t>(k - 1)]; }

  /// Affine extension: the unique bijection of Z with
  /// tau~(k+2n) = tau~(k) + 2n and k < tau~(k) < k + 2n.
  long affine_tau(long k) const;

  const std::vector<int>& pairing() const noexcept { return pairing_; }

  bool operator==(const Matching& other) const = default;

 private:
  explicit Matching(std::vector<int> pairing) : pairing_(std::move(pairing)) {}
  std::vector<int> pairing_;  // 1-based values, entry k-1 holds tau(k)
};

/// Number of pairs j < k < tau(j) < tau(k); zero iff non-crossing.
int crossing_number(const Matching& m);

/// Cyclic interval {lo..hi} of {1..2n}, possibly wrapping (lo > hi).
struct CyclicInterval {
  int lo = 0, hi = 0;
  bool operator==(const CyclicInterval&) const = default;
};

/// Finest tiling of the index circle into cyclic intervals preserved by tau.
/// Returns [[1,2n]] exactly when the matching is connected. Components may
/// wrap, e.g. tau = [4,3,2,1] splits into [2,3] and [4,1].
std::vector<CyclicInterval> connected_components(const Matching& m);

/// Half-angle sequence theta(1..2n) attached to a matching. Stored raw;
/// validation happens when a Region is formed.
struct TauShape {
  std::vector<double> angles;
  double theta(int k) const { return angles[static_cast<std::size_t>(k - 1)]; }
};

struct AlternatingWitness {
  int a = 0, b = 0, c = 0, d = 0;  // a<b<c<d with v_a = -v_b = v_c = -v_d
};

/// A polygonal region: matching plus compatible half-angles. The boundary
/// edge directions are v_k = exp(2 i theta_k); paired edges are anti-parallel
/// (theta jumps by pi/2 across a pair) and angles of crossing pairs
/// interleave. Immutable after construction; construction validates.
class Region {
 public:
  Region(Matching matching, TauShape shape, double tolerance = 1e-9);

  int n() const noexcept { return matching_.n(); }
  int size() const noexcept { return matching_.size(); }
  double tolerance() const noexcept { return tolerance_; }

  const Matching& matching() const noexcept { return matching_; }
  const TauShape& shape() const noexcept { return shape_; }

  int tau(int k) const { return matching_.tau(k); }
  long affine_tau(long k) const { return matching_.affine_tau(k); }

  double theta(int k) const { return shape_.theta(k); }
  /// theta~(k) = theta(k mod 2n) + pi * floor((k-1)/2n), 1-based reduction.
  double affine_theta(long k) const;

  /// Boundary direction v_k = exp(2 i theta~_k); 2n-periodic.
  Complex v(long k) const;
  /// Half-direction T_k = exp(i theta~_k); anti-periodic, T_{k+2n} = -T_k.
  Complex half_direction(long k) const;

  /// Directions equal up to the angle tolerance (theta congruent mod pi).
  bool same_direction(long j, long k) const;

 private:
  Matching matching_;
  TauShape shape_;
  double tolerance_;
};

/// J_k: for each pair {j, tau(j)} disjoint from {k, tau(k)}, the unique
/// representative j such that (k, j, tau(j)) reads counterclockwise.
/// Sorted ascending; has n-1 elements. Throws "index-out-of-range".
std::vector<int> j_set(const Matching& m, int k);
std::vector<int> j_set(const Region& r, int k);

/// Affine variant: elements of the j-set lifted into (k, k+2n).
std::vector<long> j_set_affine(const Matching& m, int k);

/// First witness (a,b,c,d), a<b<c<d, with v_a = -v_b = v_c = -v_d, if any.
std::optional<AlternatingWitness> alternating_witness(const Region& r);
bool is_alternating(const Region& r);

/// All k with k < k+1 < tau~(k) < tau~(k+1); nonempty iff crossings exist.
std::vector<int> descents(const Region& r);

/// Swap the pairing and angles at a descent k; drops the crossing count by
/// one and yields another valid region. Throws "not-a-descent".
Region remove_crossing(const Region& r, int k);

/// Regular 2n-gon: theta_k = (k-1) pi / 2n, tau(k) = k + n (mod 2n).
Region regular_polygon(int n);

/// Canonical fixture: 3x2 rectangle minus the bottom-center unit square
/// (boundary directions r,u,r,d,r,u,u,l,l,l,d,d). The smallest standard
/// alternating region; n = 6 with 5 crossings.
Region staple_region();

/// A valid shape for an arbitrary matching: each angle is the quarter-sum
/// of the regular-placement endpoint angles of its chord. Always satisfies
/// the region constraints, for every matching.
TauShape canonical_shape(const Matching& m);

/// Maximal sets of indices sharing a direction up to sign; tau-stable, and
/// tau restricted to each class is non-crossing.
struct DirectionClass {
  Complex representative;    // v of the smallest member
  std::vector<int> members;  // ascending
};
std::vector<DirectionClass> direction_classes(const Region& r);

/// Recover a region from its closed chain of unit boundary vectors.
/// The pairing is the unique non-crossing anti-parallel pairing inside each
/// direction class; the half-angles are lifted from arg(v)/2 and validated.
/// Throws "chain-not-closed", "alternating-ambiguous" (pairing not unique;
/// supply tau explicitly), "lift-failed".
Region from_boundary_vectors(const std::vector<std::array<double, 2>>& vs,
                             double tolerance = 1e-9);

/// Same, with the pairing fixed by the caller (required for alternating
/// regions, where the vectors alone do not determine it).
Region from_boundary_vectors(const std::vector<std::array<double, 2>>& vs,
                             const Matching& tau, double tolerance = 1e-9);

/// Boundary vectors of a region, as [x, y] pairs.
std::vector<std::array<double, 2>> boundary_vectors(const Region& r);

}  // namespace isingcorr
