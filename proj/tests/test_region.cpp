#include "doctest.h"

#include <cmath>
#include <random>

#include "isingcorr/correlate.hpp"
#include "isingcorr/region.hpp"
#include "support.hpp"

using namespace isingcorr;
using namespace testsupport;

namespace {
Matching square_matching() { return Matching::from_pairing({3, 4, 1, 2}); }
}  // namespace

TEST_CASE("matchings build from pairs") {
  const Matching m = Matching::from_pairs({{1, 3}, {2, 4}});
  CHECK(m.pairing() == std::vector<int>{3, 4, 1, 2});
  CHECK(Matching::from_pairs({{1, 2}}).pairing() == std::vector<int>{2, 1});
}

TEST_CASE("matching validation names the violated property") {
  CHECK_THROWS_WITH_AS(Matching::from_pairs({{1, 1}}), doctest::Contains("fixed-point"), Error);
  CHECK_THROWS_WITH_AS(Matching::from_pairs({{1, 2}, {1, 2}}), doctest::Contains("duplicate-index"),
                       Error);
  CHECK_THROWS_WITH_AS(Matching::from_pairing({2, 1, 4}), doctest::Contains("odd-size"), Error);
  CHECK_THROWS_WITH_AS(Matching::from_pairing({2, 3, 1, 4}), doctest::Contains("fixed-point"),
                       Error);
}

TEST_CASE("crossing numbers") {
  CHECK(crossing_number(square_matching()) == 1);
  CHECK(crossing_number(Matching::from_pairing({2, 1, 4, 3})) == 0);
  CHECK(crossing_number(regular_polygon(4).matching()) == 6);
}

TEST_CASE("connected components") {
  using CI = CyclicInterval;
  CHECK(connected_components(square_matching()) == std::vector<CI>{{1, 4}});
  CHECK(connected_components(Matching::from_pairing({2, 1, 4, 3})) ==
        std::vector<CI>{{1, 2}, {3, 4}});
  CHECK(connected_components(Matching::from_pairing({2, 1, 6, 5, 4, 3})) ==
        std::vector<CI>{{1, 2}, {3, 6}});
  // a wrapping component: the pair (4,1) encloses the nested pair (2,3)
  CHECK(connected_components(Matching::from_pairing({4, 3, 2, 1})) ==
        std::vector<CI>{{2, 3}, {4, 1}});
}

TEST_CASE("affine extension of the pairing") {
  const Matching m = square_matching();
  CHECK(m.affine_tau(3) == 5);
  CHECK(m.affine_tau(1) == 3);
  CHECK(m.affine_tau(7) == 9);
  for (const auto& mm : all_matchings(3))
    for (long k = -10; k <= 10; ++k) {
      CHECK(mm.affine_tau(mm.affine_tau(k)) == k + 6);
      CHECK(mm.affine_tau(k) > k);
      CHECK(mm.affine_tau(k) < k + 6);
      CHECK((mm.affine_tau(k) - mm.tau(((k - 1) % 6 + 6) % 6 + 1)) % 6 == 0);
    }
}

TEST_CASE("affine half-angles") {
  const Region square = regular_polygon(2);
  CHECK(square.affine_theta(5) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(square.affine_theta(2) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(square.affine_theta(-2) == doctest::Approx(-3 * kPi / 4).epsilon(1e-15));
}

TEST_CASE("j-sets of the square and the smallest matching") {
  const Region square = regular_polygon(2);
  CHECK(j_set(square, 1) == std::vector<int>{2});
  CHECK(j_set(square, 2) == std::vector<int>{3});
  CHECK(j_set(square, 4) == std::vector<int>{1});
  CHECK(j_set(Matching::from_pairing({2, 1}), 1).empty());
  CHECK_THROWS_AS(j_set(square, 5), Error);
}

TEST_CASE("j-set partitions the index set together with its pair image") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& m : all_matchings(n))
      for (int k = 1; k <= 2 * n; ++k) {
        const auto js = j_set(m, k);
        CHECK(static_cast<int>(js.size()) == n - 1);
        std::vector<bool> hit(static_cast<std::size_t>(2 * n) + 1, false);
        hit[static_cast<std::size_t>(k)] = hit[static_cast<std::size_t>(m.tau(k))] = true;
        for (int j : js) {
          CHECK(!hit[static_cast<std::size_t>(j)]);
          CHECK(!hit[static_cast<std::size_t>(m.tau(j))]);
          hit[static_cast<std::size_t>(j)] = hit[static_cast<std::size_t>(m.tau(j))] = true;
        }
        for (int i = 1; i <= 2 * n; ++i) CHECK(hit[static_cast<std::size_t>(i)]);
        // the affine variant reduces to the finite one mod 2n
        const auto aff = j_set_affine(m, k);
        std::vector<int> reduced;
        for (long a : aff) {
          CHECK(a > k);
          CHECK(a < k + 2 * n);
          reduced.push_back(static_cast<int>((a - 1) % (2 * n)) + 1);
        }
        std::sort(reduced.begin(), reduced.end());
        CHECK(reduced == js);
      }
}

TEST_CASE("alternation detection") {
  for (int n = 1; n <= 5; ++n) CHECK_FALSE(is_alternating(regular_polygon(n)));
  const auto witness = alternating_witness(staple_region());
  REQUIRE(witness.has_value());
  CHECK(witness->a == 2);
  CHECK(witness->b == 4);
  CHECK(witness->c == 6);
  CHECK(witness->d == 11);
  const Region tiny(Matching::from_pairing({2, 1}), TauShape{{0.0, kPi / 2}});
  CHECK_FALSE(is_alternating(tiny));
}

TEST_CASE("descents") {
  CHECK(descents(regular_polygon(2)) == std::vector<int>{1, 2, 3, 4});
  const Region flat(Matching::from_pairing({2, 1, 4, 3}), TauShape{{0, kPi / 2, 0.3, 0.3 + kPi / 2}});
  CHECK(descents(flat).empty());
  const auto staple_descents = descents(staple_region());
  CHECK(std::find(staple_descents.begin(), staple_descents.end(), 4) != staple_descents.end());
}

TEST_CASE("descents exist exactly when crossings do, across the exhaustive sweep") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& m : all_matchings(n)) {
      const Region r(m, canonical_shape(m));
      CHECK((crossing_number(m) == 0) == descents(r).empty());
    }
}

TEST_CASE("crossing removal at a descent") {
  const Region square = regular_polygon(2);
  const Region reduced = remove_crossing(square, 1);
  CHECK(reduced.matching().pairing() == std::vector<int>{4, 3, 2, 1});
  CHECK(reduced.theta(1) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(reduced.theta(2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(reduced.theta(3) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(reduced.theta(4) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(crossing_number(reduced.matching()) == 0);
  CHECK_THROWS_WITH_AS(remove_crossing(reduced, 1), doctest::Contains("not-a-descent"), Error);
}

TEST_CASE("crossing removal drops the count by one and preserves validity") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n)
    for (const auto& m : connected_matchings(n)) {
      if (crossing_number(m) == 0) continue;
      Region r = random_region(m, rng);
      int expected = crossing_number(m);
      while (expected > 0) {
        const auto ds = descents(r);
        REQUIRE_FALSE(ds.empty());
        const Region next = remove_crossing(r, ds.front());  // constructor re-validates
        CHECK(crossing_number(next.matching()) == expected - 1);
        CHECK_FALSE(is_alternating(next));
        r = next;
        --expected;
      }
    }
}

TEST_CASE("wrap-around descent removal stays valid") {
  // rotate the square so the descent sits at k = 2n
  const Region r(Matching::from_pairing({3, 4, 1, 2}),
                 TauShape{{0.1, 0.3, 0.1 + kPi / 2, 0.3 + kPi / 2}});
  const auto ds = descents(r);
  REQUIRE(std::find(ds.begin(), ds.end(), 4) != ds.end());
  const Region reduced = remove_crossing(r, 4);
  CHECK(crossing_number(reduced.matching()) == 0);
}

TEST_CASE("regular polygons") {
  const Region square = regular_polygon(2);
  CHECK(square.matching().pairing() == std::vector<int>{3, 4, 1, 2});
  CHECK(square.theta(1) == 0.0);
  CHECK(square.theta(2) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(square.theta(3) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(square.theta(4) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(regular_polygon(1).matching().pairing() == std::vector<int>{2, 1});
  CHECK(regular_polygon(3).matching().pairing() == std::vector<int>{4, 5, 6, 1, 2, 3});
}

TEST_CASE("region validation rejects broken angle data") {
  // pair condition broken
  CHECK_THROWS_WITH_AS(Region(square_matching(), TauShape{{0, kPi / 4, kPi / 2 + 0.1, 3 * kPi / 4}}),
                       doctest::Contains("theta-pair"), Error);
  // interleaving broken: crossing pair with equal angles
  CHECK_THROWS_WITH_AS(Region(square_matching(), TauShape{{0, 0, kPi / 2, kPi / 2}}),
                       doctest::Contains("theta-interleaving"), Error);
}

TEST_CASE("canonical shapes are valid for every matching up to 2n = 10") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& m : all_matchings(n)) CHECK_NOTHROW(Region(m, canonical_shape(m)));
}

TEST_CASE("direction classes are pairing-stable with non-crossing restriction") {
  std::mt19937_64 rng(13);
  std::vector<Region> corpus = {regular_polygon(3), staple_region()};
  for (const auto& m : connected_matchings(3)) corpus.push_back(random_region(m, rng, false));
  for (const Region& r : corpus) {
    for (const auto& cls : direction_classes(r)) {
      std::vector<bool> in(static_cast<std::size_t>(r.size()) + 1, false);
      for (int k : cls.members) in[static_cast<std::size_t>(k)] = true;
      for (int k : cls.members) CHECK(in[static_cast<std::size_t>(r.tau(k))]);
      // restriction is non-crossing: no two class pairs interleave
      for (std::size_t i = 0; i < cls.members.size(); ++i)
        for (std::size_t j = i + 1; j < cls.members.size(); ++j) {
          const int a = cls.members[i], b = cls.members[j];
          if (r.tau(a) < a || r.tau(b) < b) continue;
          const bool interleaved = a < b && b < r.tau(a) && r.tau(a) < r.tau(b);
          CHECK_FALSE(interleaved);
        }
    }
  }
}

TEST_CASE("boundary vectors of the square recover the square") {
  const Region r = from_boundary_vectors({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  CHECK(r.matching().pairing() == std::vector<int>{3, 4, 1, 2});
  for (int k = 1; k <= 4; ++k)
    CHECK(std::abs(r.v(k) - regular_polygon(2).v(k)) <= 1e-12);
}

TEST_CASE("alternating boundaries need an explicit pairing") {
  const auto staple_vs = boundary_vectors(staple_region());
  CHECK_THROWS_WITH_AS(from_boundary_vectors(staple_vs), doctest::Contains("alternating-ambiguous"),
                       Error);
  const Region recovered = from_boundary_vectors(staple_vs, staple_region().matching());
  CHECK(recovered.matching().pairing() == staple_region().matching().pairing());
  CHECK(max_abs_diff(correlations(recovered, BasisStrategy::derivative),
                     correlations(staple_region(), BasisStrategy::derivative)) <= 1e-10);
}

TEST_CASE("unclosed chains are rejected") {
  CHECK_THROWS_WITH_AS(from_boundary_vectors({{1, 0}, {0, 1}, {-1, 0}, {0, 1}}),
                       doctest::Contains("chain-not-closed"), Error);
}

TEST_CASE("vector round-trip is the identity on the non-alternating sweep") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 4; ++n)
    for (const auto& m : all_matchings(n)) {
      const Region r = random_region(m, rng);
      const Region back = from_boundary_vectors(boundary_vectors(r));
      CHECK(back.matching().pairing() == m.pairing());
      for (int k = 1; k <= r.size(); ++k) CHECK(std::abs(back.v(k) - r.v(k)) <= 1e-9);
      CHECK(max_abs_diff(correlations(back), correlations(r)) <= 1e-9);
    }
}

TEST_CASE("paired boundary vectors are anti-parallel") {
  std::mt19937_64 rng(19);
  std::vector<Region> corpus = {regular_polygon(4), staple_region()};
  for (const auto& m : connected_matchings(3)) corpus.push_back(random_region(m, rng, false));
  for (const Region& r : corpus)
    for (int k = 1; k <= r.size(); ++k) CHECK(std::abs(r.v(r.tau(k)) + r.v(k)) <= 1e-9);
}

TEST_CASE("the staple fixture is what it claims to be") {
  const Region staple = staple_region();
  CHECK(staple.n() == 6);
  CHECK(crossing_number(staple.matching()) == 5);
  CHECK(is_alternating(staple));
  // boundary directions r,u,r,d,r,u,u,l,l,l,d,d
  const Complex expectations[12] = {{1, 0}, {0, 1}, {1, 0},  {0, -1}, {1, 0},  {0, 1},
                                    {0, 1}, {-1, 0}, {-1, 0}, {-1, 0}, {0, -1}, {0, -1}};
  for (int k = 1; k <= 12; ++k) CHECK(std::abs(staple.v(k) - expectations[k - 1]) <= 1e-12);
}
