#include "isingcorr/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>

namespace isingcorr {

namespace {
constexpr double kPi = std::numbers::pi;

long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// Reduce an affine index to {1..2n}.
int reduce_index(long k, int two_n) {
  long r = (k - 1) % two_n;
  if (r < 0) r += two_n;
  return static_cast<int>(r) + 1;
}

// Counterclockwise triple test on {1..2n}.
bool ccw(int a, int b, int c) {
  return (a < b && b < c) || (b < c && c < a) || (c < a && a < b);
}

// |x| modulo pi, folded into [0, pi/2] distance-to-zero form.
double mod_pi_distance(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0) r += kPi;
  return std::min(r, kPi - r);
}
}  // namespace

Matching Matching::from_pairing(const std::vector<int>& pairing) {
  if (pairing.empty() || pairing.size() % 2 != 0)
    throw Error("odd-size", "pairing must list tau(1..2n) for n >= 1");
  const int two_n = static_cast<int>(pairing.size());
  std::vector<int> seen(static_cast<std::size_t>(two_n) + 1, 0);
  for (int k = 1; k <= two_n; ++k) {
    const int t = pairing[static_cast<std::size_t>(k - 1)];
    if (t < 1 || t > two_n)
      throw Error("index-out-of-range", "tau(" + std::to_string(k) + ") = " + std::to_string(t));
    if (t == k) throw Error("fixed-point", "tau(" + std::to_string(k) + ") = " + std::to_string(k));
    ++seen[static_cast<std::size_t>(t)];
  }
  for (int k = 1; k <= two_n; ++k) {
    if (seen[static_cast<std::size_t>(k)] != 1)
      throw Error("duplicate-index", "index " + std::to_string(k) + " is hit " +
                                         std::to_string(seen[static_cast<std::size_t>(k)]) +
                                         " times");
    const int t = pairing[static_cast<std::size_t>(k - 1)];
    if (pairing[static_cast<std::size_t>(t - 1)] != k)
      throw Error("not-involution",
                  "tau(tau(" + std::to_string(k) + ")) != " + std::to_string(k));
  }
  return Matching(pairing);
}

Matching Matching::from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  const int two_n = static_cast<int>(pairs.size()) * 2;
  if (two_n == 0) throw Error("odd-size", "at least one pair required");
  std::vector<int> pairing(static_cast<std::size_t>(two_n), 0);
  for (const auto& [a, b] : pairs) {
    if (a == b) throw Error("fixed-point", "pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
    for (int x : {a, b})
      if (x < 1 || x > two_n)
        throw Error("index-out-of-range", "index " + std::to_string(x) +
                                              " outside 1.." + std::to_string(two_n));
    if (pairing[static_cast<std::size_t>(a - 1)] != 0 || pairing[static_cast<std::size_t>(b - 1)] != 0)
      throw Error("duplicate-index",
                  "pair (" + std::to_string(a) + "," + std::to_string(b) + ") reuses an index");
    pairing[static_cast<std::size_t>(a - 1)] = b;
    pairing[static_cast<std::size_t>(b - 1)] = a;
  }
  return from_pairing(pairing);
}

long Matching::affine_tau(long k) const {
  const int two_n = size();
  const int k0 = reduce_index(k, two_n);
  const long base = k - k0;  // multiple of 2n
  const int t = tau(k0);
  return t > k0 ? base + t : base + t + two_n;
}

int crossing_number(const Matching& m) {
  const int two_n = m.size();
  int count = 0;
  for (int j = 1; j <= two_n; ++j)
    for (int k = j + 1; k <= two_n; ++k)
      if (k < m.tau(j) && m.tau(j) < m.tau(k)) ++count;
  return count;
}

namespace {

// Length of the minimal tau-stable cyclic interval starting at s.
int closed_interval_length(const Matching& m, int s) {
  const int two_n = m.size();
  int reach = 0;
  for (int o = 0; o <= reach && o < two_n; ++o) {
    const int idx = reduce_index(s + o, two_n);
    int d = (m.tau(idx) - s) % two_n;
    if (d < 0) d += two_n;
    reach = std::max(reach, d);
  }
  return reach + 1;
}

}  // namespace

std::vector<CyclicInterval> connected_components(const Matching& m) {
  const int two_n = m.size();
  std::vector<CyclicInterval> best;
  int best_first_len = two_n + 1;
  for (int g = 1; g <= two_n; ++g) {
    std::vector<CyclicInterval> tiling;
    int total = 0, s = g;
    bool ok = true;
    while (total < two_n) {
      const int len = closed_interval_length(m, s);
      if (len > two_n - total) {
        ok = false;  // minimal closed interval spills into consumed indices
        break;
      }
      tiling.push_back({s, reduce_index(s + len - 1, two_n)});
      total += len;
      s = reduce_index(s + len, two_n);
    }
    if (!ok) continue;
    int first_len = 0;
    for (const auto& c : tiling) {
      const int len = (c.hi - c.lo + two_n) % two_n + 1;
      const bool contains_one = c.lo <= c.hi ? (c.lo <= 1 && 1 <= c.hi) : (1 >= c.lo || 1 <= c.hi);
      if (contains_one) first_len = len;
    }
    if (tiling.size() > best.size() ||
        (tiling.size() == best.size() && first_len < best_first_len)) {
      best = tiling;
      best_first_len = first_len;
    }
  }
  std::sort(best.begin(), best.end(),
            [](const CyclicInterval& a, const CyclicInterval& b) { return a.lo < b.lo; });
  return best;
}

Region::Region(Matching matching, TauShape shape, double tolerance)
    : matching_(std::move(matching)), shape_(std::move(shape)), tolerance_(tolerance) {
  const int two_n = matching_.size();
  if (static_cast<int>(shape_.angles.size()) != two_n)
    throw Error("shape-size", "expected " + std::to_string(two_n) + " angles, got " +
                                  std::to_string(shape_.angles.size()));
  if (!(tolerance_ > 0)) throw Error("bad-tolerance", "tolerance must be positive");
  for (int k = 1; k <= two_n; ++k) {
    const int t = matching_.tau(k);
    if (k < t && std::abs(shape_.theta(t) - shape_.theta(k) - kPi / 2) > tolerance_)
      throw Error("theta-pair", "theta(" + std::to_string(t) + ") != theta(" +
                                    std::to_string(k) + ") + pi/2");
  }
  for (int j = 1; j <= two_n; ++j) {
    const int tj = matching_.tau(j);
    if (tj < j) continue;
    for (int k = j + 1; k < tj; ++k) {
      const int tk = matching_.tau(k);
      if (!(tj < tk)) continue;
      // crossing pair: theta_j < theta_k < theta_j + pi/2 must hold strictly
      const double d = shape_.theta(k) - shape_.theta(j);
      if (!(d > tolerance_) || !(d < kPi / 2 - tolerance_))
        throw Error("theta-interleaving",
                    "crossing pair (" + std::to_string(j) + "," + std::to_string(k) +
                        ") has non-interleaving angles");
    }
  }
}

double Region::affine_theta(long k) const {
  const int two_n = size();
  const int k0 = reduce_index(k, two_n);
  const long shift = floor_div(k - 1, two_n);
  return shape_.theta(k0) + kPi * static_cast<double>(shift);
}

Complex Region::v(long k) const {
  const double th = affine_theta(k);
  return std::polar(1.0, 2.0 * th);
}

Complex Region::half_direction(long k) const { return std::polar(1.0, affine_theta(k)); }

bool Region::same_direction(long j, long k) const {
  return mod_pi_distance(affine_theta(j) - affine_theta(k)) <= tolerance_;
}

std::vector<int> j_set(const Matching& m, int k) {
  const int two_n = m.size();
  if (k < 1 || k > two_n)
    throw Error("index-out-of-range", "k = " + std::to_string(k));
  std::vector<int> out;
  for (int j = 1; j <= two_n; ++j) {
    if (j == k || j == m.tau(k)) continue;
    if (ccw(k, j, m.tau(j))) out.push_back(j);
  }
  return out;
}

std::vector<int> j_set(const Region& r, int k) { return j_set(r.matching(), k); }

std::vector<long> j_set_affine(const Matching& m, int k) {
  const int two_n = m.size();
  if (k < 1 || k > two_n)
    throw Error("index-out-of-range", "k = " + std::to_string(k));
  std::vector<long> out;
  for (long j = k - two_n + 1; j < k; ++j) {
    const long tj = m.affine_tau(j);
    if (tj > k) out.push_back(tj);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DirectionClass> direction_classes(const Region& r) {
  const int two_n = r.size();
  std::vector<DirectionClass> classes;
  std::vector<bool> used(static_cast<std::size_t>(two_n) + 1, false);
  for (int k = 1; k <= two_n; ++k) {
    if (used[static_cast<std::size_t>(k)]) continue;
    DirectionClass cls;
    cls.representative = r.v(k);
    for (int j = k; j <= two_n; ++j) {
      // same class iff theta congruent mod pi/2 (directions equal up to sign)
      double d = std::fmod(r.theta(j) - r.theta(k), kPi / 2);
      if (d < 0) d += kPi / 2;
      d = std::min(d, kPi / 2 - d);
      if (d <= r.tolerance()) {
        cls.members.push_back(j);
        used[static_cast<std::size_t>(j)] = true;
      }
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::optional<AlternatingWitness> alternating_witness(const Region& r) {
  for (const auto& cls : direction_classes(r)) {
    const auto& mem = cls.members;
    const std::size_t m = mem.size();
    if (m < 4) continue;
    std::vector<int> sign(m);
    for (std::size_t i = 0; i < m; ++i)
      sign[i] = r.same_direction(mem[i], mem[0]) ? +1 : -1;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        if (sign[b] == sign[a]) continue;
        for (std::size_t c = b + 1; c < m; ++c) {
          if (sign[c] != sign[a]) continue;
          for (std::size_t d = c + 1; d < m; ++d) {
            if (sign[d] != sign[b]) continue;
            return AlternatingWitness{mem[a], mem[b], mem[c], mem[d]};
          }
        }
      }
  }
  return std::nullopt;
}

bool is_alternating(const Region& r) { return alternating_witness(r).has_value(); }

std::vector<int> descents(const Region& r) {
  const int two_n = r.size();
  std::vector<int> out;
  for (int k = 1; k <= two_n; ++k) {
    const long tk = r.affine_tau(k);
    const long tk1 = r.affine_tau(k + 1);
    if (tk > k + 1 && tk1 > tk) out.push_back(k);
  }
  return out;
}

Region remove_crossing(const Region& r, int k) {
  const int two_n = r.size();
  {
    const auto ds = descents(r);
    if (std::find(ds.begin(), ds.end(), k) == ds.end())
      throw Error("not-a-descent", "k = " + std::to_string(k));
  }
  const long a = r.affine_tau(k);      // tau~(k), in (k, k+2n)
  const long b = r.affine_tau(k + 1);  // tau~(k+1), > a

  std::vector<int> pairing = r.matching().pairing();
  auto set_pair = [&](long from, long to) {
    pairing[static_cast<std::size_t>(reduce_index(from, two_n) - 1)] = reduce_index(to, two_n);
  };
  set_pair(k, b);
  set_pair(k + 1, a);
  set_pair(a, k + 1);
  set_pair(b, k);

  std::vector<double> angles = r.shape().angles;
  const double th_k = r.affine_theta(k);
  const double th_k1 = r.affine_theta(k + 1);
  const long shift_k = floor_div(static_cast<long>(k) - 1, two_n);
  const long shift_k1 = floor_div(static_cast<long>(k + 1) - 1, two_n);
  angles[static_cast<std::size_t>(reduce_index(k, two_n) - 1)] =
      th_k1 - kPi * static_cast<double>(shift_k);
  angles[static_cast<std::size_t>(reduce_index(k + 1, two_n) - 1)] =
      th_k - kPi * static_cast<double>(shift_k1);

  return Region(Matching::from_pairing(pairing), TauShape{angles}, r.tolerance());
}

Region regular_polygon(int n) {
  if (n < 1) throw Error("index-out-of-range", "n must be >= 1");
  const int two_n = 2 * n;
  std::vector<int> pairing(static_cast<std::size_t>(two_n));
  std::vector<double> angles(static_cast<std::size_t>(two_n));
  for (int k = 1; k <= two_n; ++k) {
    pairing[static_cast<std::size_t>(k - 1)] = k <= n ? k + n : k - n;
    angles[static_cast<std::size_t>(k - 1)] = (k - 1) * kPi / two_n;
  }
  return Region(Matching::from_pairing(pairing), TauShape{angles});
}

Region staple_region() {
  const std::vector<int> tau = {10, 12, 9, 6, 8, 4, 11, 5, 3, 1, 7, 2};
  const std::vector<double> theta = {0,        kPi / 4, 0,        -kPi / 4,
                                     0,        kPi / 4, kPi / 4,  kPi / 2,
                                     kPi / 2,  kPi / 2, 3 * kPi / 4, 3 * kPi / 4};
  return Region(Matching::from_pairing(tau), TauShape{theta});
}

TauShape canonical_shape(const Matching& m) {
  const int two_n = m.size();
  const int n = m.n();
  std::vector<double> angles(static_cast<std::size_t>(two_n), 0.0);
  auto endpoint_angle = [&](long j) { return kPi * static_cast<double>(j - 1) / n; };
  for (int k = 1; k <= two_n; ++k) {
    if (m.tau(k) < k) continue;
    const double th = (endpoint_angle(k) + endpoint_angle(m.tau(k))) / 4.0;
    angles[static_cast<std::size_t>(k - 1)] = th;
    angles[static_cast<std::size_t>(m.tau(k) - 1)] = th + kPi / 2;
  }
  return TauShape{angles};
}

std::vector<std::array<double, 2>> boundary_vectors(const Region& r) {
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<std::size_t>(r.size()));
  for (int k = 1; k <= r.size(); ++k) {
    const Complex z = r.v(k);
    out.push_back({z.real(), z.imag()});
  }
  return out;
}

namespace {

struct Chord {
  int left = 0, right = 0;  // endpoints, left < right
};

bool chords_cross(const Chord& a, const Chord& b) {
  const Chord &f = a.left < b.left ? a : b, &s = a.left < b.left ? b : a;
  return f.left < s.left && s.left < f.right && f.right < s.right;
}

// Lift half-angles for the chords of tau against target directions alpha
// (defined mod pi). Unique up to per-crossing-component shifts; anchors each
// component in [0, pi).
std::vector<double> lift_angles(const Matching& m, const std::vector<double>& alpha_mod_pi,
                                double tolerance) {
  const int two_n = m.size();
  std::vector<Chord> chords;
  std::vector<int> chord_of(static_cast<std::size_t>(two_n) + 1, -1);
  for (int k = 1; k <= two_n; ++k)
    if (k < m.tau(k)) {
      chord_of[static_cast<std::size_t>(k)] = static_cast<int>(chords.size());
      chord_of[static_cast<std::size_t>(m.tau(k))] = static_cast<int>(chords.size());
      chords.push_back({k, m.tau(k)});
    }
  const int nc = static_cast<int>(chords.size());
  std::vector<std::vector<int>> crossing(static_cast<std::size_t>(nc));
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j)
      if (chords_cross(chords[static_cast<std::size_t>(i)], chords[static_cast<std::size_t>(j)])) {
        crossing[static_cast<std::size_t>(i)].push_back(j);
        crossing[static_cast<std::size_t>(j)].push_back(i);
      }

  std::vector<double> theta_chord(static_cast<std::size_t>(nc), 0.0);
  std::vector<bool> placed(static_cast<std::size_t>(nc), false);
  for (int start = 0; start < nc; ++start) {
    if (placed[static_cast<std::size_t>(start)]) continue;
    double a0 = std::fmod(alpha_mod_pi[static_cast<std::size_t>(chords[static_cast<std::size_t>(start)].left)], kPi);
    if (a0 < 0) a0 += kPi;
    theta_chord[static_cast<std::size_t>(start)] = a0;
    placed[static_cast<std::size_t>(start)] = true;
    std::queue<int> bfs;
    bfs.push(start);
    while (!bfs.empty()) {
      const int c = bfs.front();
      bfs.pop();
      for (int nb : crossing[static_cast<std::size_t>(c)]) {
        if (placed[static_cast<std::size_t>(nb)]) continue;
        // window for theta(nb) against every already placed crossing chord
        double lb = -1e300, ub = 1e300;
        for (int other : crossing[static_cast<std::size_t>(nb)]) {
          if (!placed[static_cast<std::size_t>(other)]) continue;
          const double to = theta_chord[static_cast<std::size_t>(other)];
          if (chords[static_cast<std::size_t>(other)].left < chords[static_cast<std::size_t>(nb)].left) {
            lb = std::max(lb, to);
            ub = std::min(ub, to + kPi / 2);
          } else {
            lb = std::max(lb, to - kPi / 2);
            ub = std::min(ub, to);
          }
        }
        const double alpha = alpha_mod_pi[static_cast<std::size_t>(chords[static_cast<std::size_t>(nb)].left)];
        // pick the unique lift alpha + pi * l inside (lb, ub), if any
        const double l = std::floor((lb - alpha) / kPi) + 1;
        const double cand = alpha + kPi * l;
        if (!(cand > lb + tolerance && cand < ub - tolerance))
          throw Error("lift-failed", "no consistent half-angle for the chord at " +
                                         std::to_string(chords[static_cast<std::size_t>(nb)].left));
        theta_chord[static_cast<std::size_t>(nb)] = cand;
        placed[static_cast<std::size_t>(nb)] = true;
        bfs.push(nb);
      }
    }
  }

  std::vector<double> theta(static_cast<std::size_t>(two_n), 0.0);
  for (int k = 1; k <= two_n; ++k) {
    const int c = chord_of[static_cast<std::size_t>(k)];
    theta[static_cast<std::size_t>(k - 1)] =
        k < m.tau(k) ? theta_chord[static_cast<std::size_t>(c)]
                     : theta_chord[static_cast<std::size_t>(c)] + kPi / 2;
  }
  return theta;
}

Region region_from_vectors(const std::vector<std::array<double, 2>>& vs,
                           const Matching* fixed_tau, double tolerance) {
  const int two_n = static_cast<int>(vs.size());
  if (two_n < 2 || two_n % 2 != 0) throw Error("odd-size", "need 2n unit vectors, n >= 1");
  double sx = 0, sy = 0;
  for (const auto& v : vs) {
    const double len = std::hypot(v[0], v[1]);
    if (std::abs(len - 1.0) > 1e-6) throw Error("not-unit", "boundary vectors must be unit length");
    sx += v[0];
    sy += v[1];
  }
  if (std::hypot(sx, sy) > 1e-6 * two_n)
    throw Error("chain-not-closed", "boundary vectors sum to (" + std::to_string(sx) + "," +
                                        std::to_string(sy) + ")");

  // alpha_k = arg(v_k) / 2, defined mod pi; index 0 unused
  std::vector<double> alpha(static_cast<std::size_t>(two_n) + 1, 0.0);
  for (int k = 1; k <= two_n; ++k)
    alpha[static_cast<std::size_t>(k)] = std::atan2(vs[static_cast<std::size_t>(k - 1)][1],
                                                    vs[static_cast<std::size_t>(k - 1)][0]) / 2.0;

  Matching tau = [&] {
    if (fixed_tau) return *fixed_tau;
    // group indices into direction classes (equal up to sign), then pair
    // opposite signs non-crossingly with a stack scan
    std::vector<int> pairing(static_cast<std::size_t>(two_n), 0);
    std::vector<bool> grouped(static_cast<std::size_t>(two_n) + 1, false);
    for (int k = 1; k <= two_n; ++k) {
      if (grouped[static_cast<std::size_t>(k)]) continue;
      std::vector<std::pair<int, int>> members;  // (index, sign vs k)
      for (int j = k; j <= two_n; ++j) {
        if (grouped[static_cast<std::size_t>(j)]) continue;
        const double d = alpha[static_cast<std::size_t>(j)] - alpha[static_cast<std::size_t>(k)];
        double half = std::fmod(d, kPi / 2);
        if (half < 0) half += kPi / 2;
        half = std::min(half, kPi / 2 - half);
        if (half > 1e-7) continue;
        grouped[static_cast<std::size_t>(j)] = true;
        members.push_back({j, mod_pi_distance(d) <= 1e-7 ? +1 : -1});
      }
      // a +-+- sign subsequence means several non-crossing anti-parallel
      // pairings exist, so the vectors alone cannot determine tau
      for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          if (members[b].second == members[a].second) continue;
          for (std::size_t c = b + 1; c < members.size(); ++c) {
            if (members[c].second != members[a].second) continue;
            for (std::size_t d = c + 1; d < members.size(); ++d)
              if (members[d].second == members[b].second)
                throw Error("alternating-ambiguous",
                            "alternating boundary: the pairing is not determined by the "
                            "vectors; supply tau explicitly");
          }
        }
      std::vector<std::pair<int, int>> stack;
      for (const auto& mb : members) {
        if (!stack.empty() && stack.back().second != mb.second) {
          pairing[static_cast<std::size_t>(stack.back().first - 1)] = mb.first;
          pairing[static_cast<std::size_t>(mb.first - 1)] = stack.back().first;
          stack.pop_back();
        } else {
          stack.push_back(mb);
        }
      }
      if (!stack.empty())
        throw Error("unpairable-directions",
                    "direction class has unbalanced signs; no anti-parallel pairing exists");
    }
    return Matching::from_pairing(pairing);
  }();

  const auto theta = lift_angles(tau, alpha, tolerance);
  return Region(tau, TauShape{theta}, tolerance);
}

}  // namespace

Region from_boundary_vectors(const std::vector<std::array<double, 2>>& vs, double tolerance) {
  return region_from_vectors(vs, nullptr, tolerance);
}

Region from_boundary_vectors(const std::vector<std::array<double, 2>>& vs, const Matching& tau,
                             double tolerance) {
  return region_from_vectors(vs, &tau, tolerance);
}

}  // namespace isingcorr
