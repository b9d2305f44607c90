#pragma once

#include <cstdint>
#include <vector>

#include "isingcorr/correlate.hpp"
#include "isingcorr/region.hpp"

namespace isingcorr {

struct Vec2 {
  double x = 0, y = 0;
};

/// Straight-chord realization of a matching: 2n jittered endpoints on the
/// unit circle, one chord per pair. Chords cross exactly when their index
/// pairs interleave, so the crossing count equals the matching's.
struct Arrangement {
  int n = 0;
  std::vector<Vec2> endpoints;               // d_1 .. d_2n, counterclockwise
  std::vector<std::pair<int, int>> chords;   // (j, tau(j)) with j < tau(j)
  struct Crossing {
    int chord_a = 0, chord_b = 0;  // chord indices, left(a) < left(b)
    Vec2 point;
  };
  std::vector<Crossing> crossings;
};

/// Place endpoints at the regular angles plus seeded jitter (<= 0.01 rad)
/// and retry until no crossing comes closer than a safety margin to a third
/// chord. Throws "genericity" after 100 attempts.
Arrangement build_arrangement(const Matching& m, std::uint64_t seed);

/// Weighted graph on the black faces of the arrangement complement.
/// Boundary label j sits on the face touching the arc between endpoints
/// 2j-1 and 2j; labels sharing a face act as one contracted vertex. Each
/// crossing contributes an edge between the two black faces at it, with
/// weight cot(theta_e / 2) where theta_e is theta_k - theta_j when the
/// black quadrants open toward the arcs in (j,k) and (tau j, tau k), and
/// theta_tau(j) - theta_k otherwise. The two candidates sum to pi/2.
struct IsingGraph {
  int n_labels = 0;
  int vertex_count = 0;
  std::vector<int> label_face;  // face-vertex id per boundary label, size n
  struct Edge {
    int u = 0, v = 0;
    double weight = 0;   // x_e = cot(theta_e / 2) > 1
    double theta_e = 0;  // in (0, pi/2)
  };
  std::vector<Edge> edges;
};

/// Throws "matching-mismatch" when the arrangement does not realize the
/// region's pairing and "coloring-inconsistent" when the parity coloring
/// fails to put every boundary label on a black face.
IsingGraph build_ising_graph(const Arrangement& a, const Region& r);

/// Partition function by direct enumeration (global spin flip counted, so
/// an edgeless graph gives 2^V and a single edge gives 2(x_e + 1)).
double partition_function(const IsingGraph& g);

/// Boundary correlations by exact enumeration over spin configurations,
/// Gray-code order with one spin pinned. Contracted labels correlate at
/// exactly 1. Throws "too-large" above 26 vertices.
CorrelationMatrix exact_correlations(const IsingGraph& g);

struct OracleResult {
  CorrelationMatrix mean;
  double spread = 0;  // max entrywise range across placements
};

/// Run the arrangement -> graph -> enumeration chain for several
/// independent jitters. The per-entry spread must stay within the
/// agreement tolerance (the correlations do not depend on the placement);
/// otherwise throws "spread".
OracleResult oracle_correlations(const Region& r, int placements, std::uint64_t seed,
                                 const TolerancePolicy& policy = {});

}  // namespace isingcorr
