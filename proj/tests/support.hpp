#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "isingcorr/correlate.hpp"
#include "isingcorr/region.hpp"

namespace testsupport {

using namespace isingcorr;

inline constexpr double kPi = std::numbers::pi;

/// All fixed-point-free involutions on {1..2n}, built by always pairing the
/// smallest free index.
inline std::vector<Matching> all_matchings(int n) {
  std::vector<Matching> out;
  std::vector<int> pairing(static_cast<std::size_t>(2 * n), 0);
  auto rec = [&](auto&& self) -> void {
    int first = 0;
    for (int k = 1; k <= 2 * n; ++k)
      if (pairing[static_cast<std::size_t>(k - 1)] == 0) {
        first = k;
        break;
      }
    if (first == 0) {
      out.push_back(Matching::from_pairing(pairing));
      return;
    }
    for (int t = first + 1; t <= 2 * n; ++t) {
      if (pairing[static_cast<std::size_t>(t - 1)] != 0) continue;
      pairing[static_cast<std::size_t>(first - 1)] = t;
      pairing[static_cast<std::size_t>(t - 1)] = first;
      self(self);
      pairing[static_cast<std::size_t>(first - 1)] = 0;
      pairing[static_cast<std::size_t>(t - 1)] = 0;
    }
  };
  rec(rec);
  return out;
}

inline std::vector<Matching> connected_matchings(int n) {
  std::vector<Matching> out;
  for (auto& m : all_matchings(n))
    if (connected_components(m).size() == 1) out.push_back(m);
  return out;
}

/// Random valid shape for a matching: start from the canonical shape and
/// resweep each chord angle uniformly inside its feasibility window.
inline TauShape random_shape(const Matching& m, std::mt19937_64& rng, int sweeps = 3) {
  const int two_n = m.size();
  struct Chord {
    int left, right;
  };
  std::vector<Chord> chords;
  for (int k = 1; k <= two_n; ++k)
    if (k < m.tau(k)) chords.push_back({k, m.tau(k)});
  const int nc = static_cast<int>(chords.size());
  auto crosses = [&](int a, int b) {
    const Chord &f = chords[static_cast<std::size_t>(std::min(a, b))],
                &s = chords[static_cast<std::size_t>(std::max(a, b))];
    return f.left < s.left && s.left < f.right && f.right < s.right;
  };

  TauShape shape = canonical_shape(m);
  std::vector<double> th(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) th[static_cast<std::size_t>(c)] = shape.theta(chords[static_cast<std::size_t>(c)].left);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    std::vector<int> order(static_cast<std::size_t>(nc));
    for (int c = 0; c < nc; ++c) order[static_cast<std::size_t>(c)] = c;
    std::shuffle(order.begin(), order.end(), rng);
    for (int c : order) {
      double lb = th[static_cast<std::size_t>(c)] - kPi / 4, ub = th[static_cast<std::size_t>(c)] + kPi / 4;
      for (int o = 0; o < nc; ++o) {
        if (o == c || !crosses(c, o)) continue;
        if (chords[static_cast<std::size_t>(o)].left < chords[static_cast<std::size_t>(c)].left) {
          lb = std::max(lb, th[static_cast<std::size_t>(o)]);
          ub = std::min(ub, th[static_cast<std::size_t>(o)] + kPi / 2);
        } else {
          lb = std::max(lb, th[static_cast<std::size_t>(o)] - kPi / 2);
          ub = std::min(ub, th[static_cast<std::size_t>(o)]);
        }
      }
      const double margin = 0.05 * (ub - lb);
      th[static_cast<std::size_t>(c)] = lb + margin + (ub - lb - 2 * margin) * unit(rng);
    }
  }

  std::vector<double> angles(static_cast<std::size_t>(two_n));
  for (int c = 0; c < nc; ++c) {
    angles[static_cast<std::size_t>(chords[static_cast<std::size_t>(c)].left - 1)] = th[static_cast<std::size_t>(c)];
    angles[static_cast<std::size_t>(chords[static_cast<std::size_t>(c)].right - 1)] =
        th[static_cast<std::size_t>(c)] + kPi / 2;
  }
  return TauShape{angles};
}

/// Random valid region; resamples until non-alternating when requested.
inline Region random_region(const Matching& m, std::mt19937_64& rng,
                            bool require_non_alternating = true) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Region r(m, random_shape(m, rng));
    if (!require_non_alternating || !is_alternating(r)) return r;
  }
  throw Error("generation", "could not sample a non-alternating shape");
}

inline double max_abs_diff(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  double worst = 0;
  for (int j = 1; j <= a.n(); ++j)
    for (int k = 1; k <= a.n(); ++k) worst = std::max(worst, std::abs(a(j, k) - b(j, k)));
  return worst;
}

}  // namespace testsupport
