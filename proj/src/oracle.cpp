#include "isingcorr/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace isingcorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGenericityMargin = 1e-6;

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Signed distance-like orientation of point p against the chord's line.
double side_value(const Arrangement& arr, int chord, Vec2 p) {
  const auto [j, t] = arr.chords[static_cast<std::size_t>(chord)];
  return cross(arr.endpoints[static_cast<std::size_t>(j - 1)],
               arr.endpoints[static_cast<std::size_t>(t - 1)], p);
}

Vec2 segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x);
  const double t = ((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x)) / den;
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

bool interleaved(std::pair<int, int> a, std::pair<int, int> b) {
  if (a.first > b.first) std::swap(a, b);
  return a.first < b.first && b.first < a.second && a.second < b.second;
}

}  // namespace

Arrangement build_arrangement(const Matching& m, std::uint64_t seed) {
  const int two_n = m.size();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);

  for (int attempt = 0; attempt < 100; ++attempt) {
    Arrangement arr;
    arr.n = m.n();
    arr.endpoints.resize(static_cast<std::size_t>(two_n));
    for (int k = 1; k <= two_n; ++k) {
      const double phi = 2.0 * kPi * (k - 1) / two_n + jitter(rng);
      arr.endpoints[static_cast<std::size_t>(k - 1)] = {std::cos(phi), std::sin(phi)};
    }
    for (int k = 1; k <= two_n; ++k)
      if (k < m.tau(k)) arr.chords.push_back({k, m.tau(k)});
    const int nc = static_cast<int>(arr.chords.size());
    for (int a = 0; a < nc; ++a)
      for (int b = a + 1; b < nc; ++b) {
        if (!interleaved(arr.chords[static_cast<std::size_t>(a)],
                         arr.chords[static_cast<std::size_t>(b)]))
          continue;
        const auto [j, tj] = arr.chords[static_cast<std::size_t>(a)];
        const auto [k, tk] = arr.chords[static_cast<std::size_t>(b)];
        const Vec2 p = segment_intersection(arr.endpoints[static_cast<std::size_t>(j - 1)],
                                            arr.endpoints[static_cast<std::size_t>(tj - 1)],
                                            arr.endpoints[static_cast<std::size_t>(k - 1)],
                                            arr.endpoints[static_cast<std::size_t>(tk - 1)]);
        arr.crossings.push_back({a, b, p});
      }
    bool generic = true;
    for (const auto& c : arr.crossings)
      for (int other = 0; other < nc && generic; ++other) {
        if (other == c.chord_a || other == c.chord_b) continue;
        if (std::abs(side_value(arr, other, c.point)) < kGenericityMargin) generic = false;
      }
    if (generic) return arr;
  }
  throw Error("genericity", "no generic placement found after 100 jitters");
}

namespace {

// A face is a sign class over the chord lines; ids are assigned on demand.
class FaceTable {
 public:
  int id_of(const std::vector<std::int8_t>& signs) {
    return ids_.try_emplace(signs, static_cast<int>(ids_.size())).first->second;
  }
  int count() const { return static_cast<int>(ids_.size()); }

 private:
  std::map<std::vector<std::int8_t>, int> ids_;
};

std::int8_t sign_of(double x) { return x > 0 ? std::int8_t{1} : std::int8_t{-1}; }

}  // namespace

IsingGraph build_ising_graph(const Arrangement& arr, const Region& r) {
  const int n = r.n();
  const int nc = static_cast<int>(arr.chords.size());
  for (const auto& [j, t] : arr.chords)
    if (r.tau(j) != t)
      throw Error("matching-mismatch", "arrangement chord (" + std::to_string(j) + "," +
                                           std::to_string(t) + ") is not a pair of the region");

  auto signs_at = [&](Vec2 p) {
    std::vector<std::int8_t> s(static_cast<std::size_t>(nc));
    for (int c = 0; c < nc; ++c) s[static_cast<std::size_t>(c)] = sign_of(side_value(arr, c, p));
    return s;
  };

  // Representative point just inside the arc between endpoints 2j-1 and 2j.
  auto label_point = [&](int j) {
    const Vec2 a = arr.endpoints[static_cast<std::size_t>(2 * j - 2)];
    const Vec2 b = arr.endpoints[static_cast<std::size_t>(2 * j - 1)];
    const double phi_a = std::atan2(a.y, a.x);
    double phi_b = std::atan2(b.y, b.x);
    if (phi_b < phi_a) phi_b += 2.0 * kPi;
    const double mid = (phi_a + phi_b) / 2.0;
    const double radius = 1.0 - 1e-4;
    return Vec2{radius * std::cos(mid), radius * std::sin(mid)};
  };

  FaceTable faces;
  std::vector<std::vector<std::int8_t>> label_signs(static_cast<std::size_t>(n));
  IsingGraph g;
  g.n_labels = n;
  g.label_face.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    label_signs[static_cast<std::size_t>(j - 1)] = signs_at(label_point(j));
    g.label_face[static_cast<std::size_t>(j - 1)] =
        faces.id_of(label_signs[static_cast<std::size_t>(j - 1)]);
  }

  // Parity coloring anchored at label 1's face (black). Every label must be
  // black; a failure here means the face bookkeeping went wrong.
  const auto& reference = label_signs[0];
  auto is_black = [&](const std::vector<std::int8_t>& s) {
    int diff = 0;
    for (std::size_t c = 0; c < s.size(); ++c)
      if (s[c] != reference[c]) ++diff;
    return diff % 2 == 0;
  };
  for (int j = 1; j <= n; ++j)
    if (!is_black(label_signs[static_cast<std::size_t>(j - 1)]))
      throw Error("coloring-inconsistent",
                  "boundary label " + std::to_string(j) + " sits on a white face");

  for (const auto& c : arr.crossings) {
    const auto [j, tj] = arr.chords[static_cast<std::size_t>(c.chord_a)];
    const auto [k, tk] = arr.chords[static_cast<std::size_t>(c.chord_b)];
    // Quadrant opening toward the arcs between d_j and d_k: on chord a's
    // side of d_k and chord b's side of d_j.
    auto base = signs_at(c.point);  // entries at chord_a/chord_b are junk; overwritten
    const std::int8_t sa = sign_of(side_value(arr, c.chord_a, arr.endpoints[static_cast<std::size_t>(k - 1)]));
    const std::int8_t sb = sign_of(side_value(arr, c.chord_b, arr.endpoints[static_cast<std::size_t>(j - 1)]));

    auto quadrant_signs = [&](std::int8_t va, std::int8_t vb) {
      auto s = base;
      s[static_cast<std::size_t>(c.chord_a)] = va;
      s[static_cast<std::size_t>(c.chord_b)] = vb;
      return s;
    };

    const auto toward_jk = quadrant_signs(sa, sb);
    double theta_e;
    std::vector<std::int8_t> black1, black2;
    if (is_black(toward_jk)) {
      theta_e = r.theta(k) - r.theta(j);
      black1 = toward_jk;
      black2 = quadrant_signs(static_cast<std::int8_t>(-sa), static_cast<std::int8_t>(-sb));
    } else {
      theta_e = r.theta(r.tau(j)) - r.theta(k);
      black1 = quadrant_signs(static_cast<std::int8_t>(-sa), sb);
      black2 = quadrant_signs(sa, static_cast<std::int8_t>(-sb));
    }
    if (!(theta_e > 0.0 && theta_e < kPi / 2))
      throw Error("coloring-inconsistent", "edge angle outside (0, pi/2)");
    IsingGraph::Edge e;
    e.u = faces.id_of(black1);
    e.v = faces.id_of(black2);
    e.theta_e = theta_e;
    e.weight = 1.0 / std::tan(theta_e / 2.0);
    g.edges.push_back(e);
  }

  g.vertex_count = faces.count();
  return g;
}

namespace {

struct Accumulators {
  double z = 0;
  std::vector<double> pair_sums;  // over label pairs j < k on distinct faces
};

// Shared enumeration: Gray-code walk with vertex 0 pinned to +1, refreshing
// the running weight periodically to cap drift.
template <typename Visit>
void enumerate_configs(const IsingGraph& g, Visit&& visit) {
  const int V = std::max(g.vertex_count, 1);
  if (V > 26) throw Error("too-large", std::to_string(V) + " vertices exceed the enumeration bound");
  std::vector<std::vector<std::pair<int, double>>> incident(static_cast<std::size_t>(V));
  for (const auto& e : g.edges) {
    incident[static_cast<std::size_t>(e.u)].push_back({e.v, e.weight});
    incident[static_cast<std::size_t>(e.v)].push_back({e.u, e.weight});
  }
  std::vector<int> spin(static_cast<std::size_t>(V), +1);
  auto full_weight = [&] {
    double w = 1.0;
    for (const auto& e : g.edges)
      if (spin[static_cast<std::size_t>(e.u)] == spin[static_cast<std::size_t>(e.v)]) w *= e.weight;
    return w;
  };
  double w = full_weight();
  visit(spin, w);
  const std::uint64_t total = V > 1 ? (1ULL << (V - 1)) : 1;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    const int v = bit + 1;  // vertex 0 stays pinned
    spin[static_cast<std::size_t>(v)] = -spin[static_cast<std::size_t>(v)];
    for (const auto& [u, x] : incident[static_cast<std::size_t>(v)]) {
      if (spin[static_cast<std::size_t>(u)] == spin[static_cast<std::size_t>(v)])
        w *= x;
      else
        w /= x;
    }
    if ((step & 0xfffULL) == 0) w = full_weight();
    visit(spin, w);
  }
}

}  // namespace

double partition_function(const IsingGraph& g) {
  double z = 0;
  enumerate_configs(g, [&](const std::vector<int>&, double w) { z += w; });
  return 2.0 * z;  // the pinned spin halves the raw state space
}

CorrelationMatrix exact_correlations(const IsingGraph& g) {
  const int n = g.n_labels;
  std::vector<std::pair<int, int>> open_pairs;
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k)
      if (g.label_face[static_cast<std::size_t>(j - 1)] != g.label_face[static_cast<std::size_t>(k - 1)])
        open_pairs.push_back({j, k});

  double z = 0;
  std::vector<double> sums(open_pairs.size(), 0.0);
  enumerate_configs(g, [&](const std::vector<int>& spin, double w) {
    z += w;
    for (std::size_t i = 0; i < open_pairs.size(); ++i) {
      const auto [j, k] = open_pairs[i];
      const int sj = spin[static_cast<std::size_t>(g.label_face[static_cast<std::size_t>(j - 1)])];
      const int sk = spin[static_cast<std::size_t>(g.label_face[static_cast<std::size_t>(k - 1)])];
      sums[i] += w * sj * sk;
    }
  });

  RealMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 1.0);
  for (std::size_t i = 0; i < open_pairs.size(); ++i) {
    const auto [j, k] = open_pairs[i];
    const double value = sums[i] / z;
    m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(k - 1)) = value;
    m(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(j - 1)) = value;
  }
  return CorrelationMatrix{std::move(m)};
}

OracleResult oracle_correlations(const Region& r, int placements, std::uint64_t seed,
                                 const TolerancePolicy& policy) {
  if (placements < 1) throw Error("index-out-of-range", "placements must be >= 1");
  const int n = r.n();
  RealMatrix mean(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  RealMatrix lo(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 1e300);
  RealMatrix hi(static_cast<std::size_t>(n), static_cast<std::size_t>(n), -1e300);
  for (int i = 0; i < placements; ++i) {
    const Arrangement arr = build_arrangement(r.matching(), seed + 1000003ULL * static_cast<std::uint64_t>(i));
    const CorrelationMatrix m = exact_correlations(build_ising_graph(arr, r));
    for (std::size_t a = 0; a < mean.rows(); ++a)
      for (std::size_t b = 0; b < mean.cols(); ++b) {
        mean(a, b) += m.entries(a, b) / placements;
        lo(a, b) = std::min(lo(a, b), m.entries(a, b));
        hi(a, b) = std::max(hi(a, b), m.entries(a, b));
      }
  }
  double spread = 0;
  for (std::size_t a = 0; a < mean.rows(); ++a)
    for (std::size_t b = 0; b < mean.cols(); ++b) spread = std::max(spread, hi(a, b) - lo(a, b));
  if (spread > policy.agreement_eps)
    throw Error("spread", "placement spread " + std::to_string(spread) +
                              " exceeds tolerance; correlations should not depend on the placement");
  return OracleResult{CorrelationMatrix{std::move(mean)}, spread};
}

}  // namespace isingcorr
