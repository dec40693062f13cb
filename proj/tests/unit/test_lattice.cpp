#include "dhwalk/lattice.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

using namespace dhwalk;

TEST(Lattice, DefaultBasisPairing) {
  const auto lat = IntersectionLattice::blowup_plane(3);
  EXPECT_EQ(lat.rank(), 4u);
  EXPECT_EQ(lat.name(), "CP2#3");
  const LatticeClass L = lat.basis(0), E1 = lat.basis(1);
  EXPECT_EQ(pair(lat, L, L), 1);
  EXPECT_EQ(pair(lat, E1, E1), -1);
  EXPECT_EQ(pair(lat, L, E1), 0);
  EXPECT_EQ(*lat.canonical(), (LatticeClass{-3, 1, 1, 1}));
  EXPECT_EQ(pair(lat, *lat.canonical(), *lat.canonical()), 9 - 3);
}

TEST(Lattice, ProductLattice) {
  const auto lat = IntersectionLattice::product();
  EXPECT_EQ(lat.name(), "S2xS2");
  EXPECT_TRUE(lat.is_even());
  EXPECT_EQ(pair(lat, *lat.canonical(), *lat.canonical()), 8);
  EXPECT_TRUE(exceptional_classes(lat).classes.empty());
  EXPECT_TRUE(exceptional_classes(lat).certified);
}

TEST(Lattice, RankMismatchIsDimensionError) {
  const auto lat = IntersectionLattice::blowup_plane(2);
  EXPECT_THROW(pair(lat, LatticeClass{1, 0}, LatticeClass{1, 0, 0}), DimensionError);
}

TEST(Lattice, GeneralLatticeValidation) {
  EXPECT_THROW(IntersectionLattice::general({{2, 0}, {0, 1}}), InvalidLattice);
  EXPECT_THROW(IntersectionLattice::general({{1, 1}, {0, -1}}), InvalidLattice);
  EXPECT_THROW(IntersectionLattice::general({{1, 0}, {0, -1}}, {"a", "a"}), InvalidLattice);
  const auto g = IntersectionLattice::general({{0, 1}, {1, 0}});
  EXPECT_EQ(g.kind(), LatticeKind::general);
  EXPECT_FALSE(exceptional_classes(g).certified);
}

TEST(Lattice, ExceptionalCountsMatchDelPezzo) {
  const std::size_t expected[] = {0, 1, 3, 6, 10, 16, 27, 56, 240};
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(exceptional_classes(k).classes.size(), expected[k]) << k;
  EXPECT_THROW(exceptional_classes(9), UnsupportedMove);
  EXPECT_TRUE(exceptional_classes(3).certified);
  EXPECT_FALSE(exceptional_classes(4).certified);
}

TEST(Lattice, ExceptionalClassesMatchBruteForce) {
  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k <= 3; ++k) {
    const auto got = exceptional_classes(k).classes;
    EXPECT_EQ(std::set<LatticeClass>(got.begin(), got.end()), oracle::brute_exceptional(k)) << k;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
  // Degrees stay small up to k = 6, so the same box still covers everything.
  for (int k = 4; k <= 6; ++k) {
    const auto got = exceptional_classes(k).classes;
    EXPECT_EQ(std::set<LatticeClass>(got.begin(), got.end()), oracle::brute_exceptional(k)) << k;
  }
}

TEST(Lattice, ExceptionalListIsDescendingLex) {
  const auto c = exceptional_classes(3).classes;
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c.front(), (LatticeClass{1, 0, -1, -1}));
  EXPECT_EQ(c.back(), (LatticeClass{0, 0, 0, 1}));
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end(), DescendingLex{}));
}

TEST(Lattice, FormatClass) {
  const auto lat = IntersectionLattice::blowup_plane(3);
  EXPECT_EQ(format_class(lat, LatticeClass{1, -1, -1, 0}), "L-E1-E2");
  EXPECT_EQ(format_class(lat, LatticeClass{2, -1, -1, -1}), "2L-E1-E2-E3");
  EXPECT_EQ(format_class(lat, LatticeClass{0, 0, 0, 0}), "0");
  EXPECT_EQ(format_class(lat, RationalClass{make_rational(1, 2), 0, 0, Rational(-3)}), "(1/2)L-3E3");
}

TEST(Lattice, CremonaIsAnInvolutiveIsometryFixingK) {
  const auto lat = IntersectionLattice::blowup_plane(3);
  const auto cr = cremona_standard(lat, 1, 2, 3);
  EXPECT_TRUE(cr.preserves_canonical);
  EXPECT_TRUE(preserves_pairing(lat, cr.matrix));
  EXPECT_EQ(cr.apply(LatticeClass{1, 0, 0, 0}), (LatticeClass{2, -1, -1, -1}));
  EXPECT_EQ(cr.apply(LatticeClass{0, 1, 0, 0}), (LatticeClass{1, 0, -1, -1}));
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto x = oracle::random_class(rng, 4);
    EXPECT_EQ(cr.apply(cr.apply(x)), x);
  }
  // Permutes exceptional classes.
  std::set<LatticeClass> image;
  for (const auto& c : exceptional_classes(3).classes) image.insert(cr.apply(c));
  const auto all = exceptional_classes(3).classes;
  EXPECT_EQ(image, std::set<LatticeClass>(all.begin(), all.end()));
  EXPECT_THROW(cremona_standard(IntersectionLattice::blowup_plane(2), 1, 2, 3), UnsupportedMove);
  EXPECT_THROW(cremona_standard(lat, 1, 1, 2), UnsupportedMove);
}

TEST(Lattice, BlowUpAppendsExceptional) {
  const auto up = blow_up_lattice(IntersectionLattice::blowup_plane(1));
  EXPECT_EQ(up.lattice.name(), "CP2#2");
  EXPECT_EQ(up.exceptional, (LatticeClass{0, 0, 1}));
  EXPECT_EQ(up.include(LatticeClass{1, -1}), (LatticeClass{1, -1, 0}));
}

TEST(Lattice, ProductBlowUpIsCanonicalized) {
  const auto prod = IntersectionLattice::product();
  const auto up = blow_up_lattice(prod);
  EXPECT_EQ(up.lattice.name(), "CP2#2");
  EXPECT_TRUE(is_exceptional(up.lattice, up.exceptional));
  const std::vector<LatticeClass> gens{{1, 0}, {0, 1}};
  for (const auto& a : gens)
    for (const auto& b : gens) EXPECT_EQ(pair(up.lattice, up.include(a), up.include(b)), pair(prod, a, b));
  for (const auto& a : gens) EXPECT_EQ(pair(up.lattice, up.include(a), up.exceptional), 0);
  EXPECT_EQ(up.include(*prod.canonical()) + up.exceptional, *up.lattice.canonical());
}

TEST(Lattice, BlowDownExampleFromCP2_3) {
  const auto lat = IntersectionLattice::blowup_plane(3);
  const LatticeClass C{1, -1, -1, 0};
  const auto map = blow_down_data(lat, C);
  EXPECT_EQ(map.downstairs.name(), "CP2#2");
  const auto Lp = map.pullback_basis[0];
  EXPECT_EQ(oracle::dot(Lp, Lp), 1);
  EXPECT_EQ(oracle::dot(Lp, C), 0);
  for (std::size_t i = 1; i < map.pullback_basis.size(); ++i) {
    EXPECT_EQ(oracle::dot(map.pullback_basis[i], map.pullback_basis[i]), -1);
    EXPECT_EQ(oracle::dot(map.pullback_basis[i], C), 0);
    EXPECT_EQ(oracle::dot(map.pullback_basis[i], Lp), 0);
  }
  EXPECT_EQ(map.pullback(*map.downstairs.canonical()), *lat.canonical() - C);
  // e- = -L+E1+E2+E3 arriving at 5; e- + C = E3 pushes to L'-E1'-E2'.
  EXPECT_EQ(map.pushforward(LatticeClass{-1, 1, 1, 1} + C), (LatticeClass{1, -1, -1}));
  // The class at t = 5 has areas L=5, E1=3, E2=2, E3=1, i.e. coordinates 5L-3E1-2E2-E3.
  const RationalClass w5{Rational(5), Rational(-3), Rational(-2), Rational(-1)};
  const auto down = map.pushforward(w5);
  const auto& dl = map.downstairs;
  // Downstairs areas 9-t, 7-t, 6-t at t = 5.
  EXPECT_EQ(pair(dl, down, dl.basis(0)), Rational(4));
  EXPECT_EQ(pair(dl, down, dl.basis(1)), Rational(2));
  EXPECT_EQ(pair(dl, down, dl.basis(2)), Rational(1));
}

TEST(Lattice, PushforwardAfterPullbackIsIdentity) {
  std::mt19937 rng(11);
  for (int k = 1; k <= 3; ++k) {
    const auto lat = IntersectionLattice::blowup_plane(k);
    for (const auto& c : exceptional_classes(k).classes) {
      const auto map = blow_down_data(lat, c, 3);
      for (int i = 0; i < 20; ++i) {
        const auto x = oracle::random_class(rng, map.downstairs.rank());
        EXPECT_EQ(map.pushforward(map.pullback(x)), x);
        const auto y = map.pullback(x);
        EXPECT_EQ(oracle::dot(y, c), 0);
      }
    }
  }
}

TEST(Lattice, CharacteristicBlowDownGivesProduct) {
  const auto lat = IntersectionLattice::blowup_plane(2);
  const auto map = blow_down_data(lat, LatticeClass{1, -1, -1});
  EXPECT_EQ(map.downstairs.name(), "S2xS2");
  for (const auto& r : map.pullback_basis) {
    EXPECT_EQ(oracle::dot(r, r), 0);
  }
  EXPECT_EQ(oracle::dot(map.pullback_basis[0], map.pullback_basis[1]), 1);
  EXPECT_EQ(map.pullback(LatticeClass{-2, -2}), (LatticeClass{-3, 1, 1} - LatticeClass{1, -1, -1}));
}

TEST(Lattice, BlowDownErrors) {
  const auto lat = IntersectionLattice::blowup_plane(2);
  EXPECT_THROW(blow_down_data(lat, LatticeClass{1, 0, 0}), InvalidBlowDown);
  EXPECT_THROW(blow_down_data(IntersectionLattice::product(), LatticeClass{1, 0}), InvalidBlowDown);
  EXPECT_THROW(blow_down_data(lat, LatticeClass{0, 1}), DimensionError);
  try {
    blow_down_data(IntersectionLattice::blowup_plane(3), LatticeClass{0, 0, 0, 1}, 0);
    FAIL() << "expected SearchExhausted";
  } catch (const SearchExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("<= 0"), std::string::npos);
  }
}

TEST(Lattice, FingerprintIsInvariantUnderCremona) {
  const auto lat = IntersectionLattice::blowup_plane(3);
  const auto cr = cremona_standard(lat, 1, 2, 3);
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    const auto x = oracle::random_class(rng, 4, 3);
    EXPECT_EQ(class_fingerprint(lat, x), class_fingerprint(lat, cr.apply(x)));
  }
  const auto f = class_fingerprint(lat, LatticeClass{-1, 1, 1, 1});
  EXPECT_EQ(f.square, -2);
  EXPECT_EQ(*f.canonical_pairing, 0);
  EXPECT_EQ(f.negated(), class_fingerprint(lat, LatticeClass{1, -1, -1, -1}));
}
