#include <random>

#include <gtest/gtest.h>

#include "symdyn/geometry.hpp"

namespace symdyn {
namespace {

FiniteSet<Z1> multiples(int step, int lo, int hi) {
  std::vector<Z1> v;
  for (int x = lo; x < hi; ++x)
    if (((x % step) + step) % step == 0) v.push_back(Z1{x});
  return FiniteSet<Z1>(v);
}

const FiniteSet<Z1> kUnit = interval(-1, 2);

TEST(FiniteSetTest, CanonicalOrderAndDedup) {
  FiniteSet<Z2> s{Z2{1, 0}, Z2{0, 5}, Z2{1, 0}, Z2{0, -1}};
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], (Z2{0, -1}));
  EXPECT_EQ(s[2], (Z2{1, 0}));
  EXPECT_TRUE(s.contains(Z2{0, 5}));
  EXPECT_FALSE(s.contains(Z2{5, 0}));
}

TEST(FiniteSetTest, Algebra) {
  auto a = interval(0, 5);
  auto b = interval(3, 8);
  EXPECT_EQ(unite(a, b), interval(0, 8));
  EXPECT_EQ(intersect(a, b), interval(3, 5));
  EXPECT_EQ(minus(a, b), interval(0, 3));
  EXPECT_EQ(sym_diff(a, b).size(), 6u);
  EXPECT_EQ(translate(a, Z1{10}), interval(10, 15));
  EXPECT_EQ(product(a, b), interval(3, 12));
  EXPECT_EQ(inverse(a), interval(-4, 1));
  EXPECT_EQ(power(kUnit, 3), interval(-3, 4));
  EXPECT_EQ(power(kUnit, 0), (FiniteSet<Z1>{Z1{0}}));
  EXPECT_TRUE(is_symmetric(kUnit));
  EXPECT_FALSE(is_symmetric(a));
  EXPECT_TRUE(is_subset(interval(1, 3), a));
  EXPECT_TRUE(disjoint(a, interval(5, 9)));
}

TEST(FolnerBoxTest, SymmetricAscending) {
  for (int n = 1; n < 6; ++n) {
    auto f = folner_box<Z2>(n);
    EXPECT_EQ(f.size(), static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)));
    EXPECT_TRUE(is_symmetric(f));
    EXPECT_TRUE(is_subset(f, folner_box<Z2>(n + 1)));
  }
  EXPECT_THROW(folner_box<Z1>(0), PreconditionError);
}

TEST(BoundaryInteriorTest, IntervalWithUnitWindow) {
  auto bi = boundary_interior(interval(0, 10), kUnit);
  EXPECT_EQ(bi.boundary, (FiniteSet<Z1>{Z1{0}, Z1{9}}));
  EXPECT_EQ(bi.interior, interval(1, 9));
}

TEST(BoundaryInteriorTest, IdentityCase) {
  FiniteSet<Z1> e{Z1{0}};
  auto bi = boundary_interior(e, e);
  EXPECT_TRUE(bi.boundary.empty());
  EXPECT_EQ(bi.interior, e);
}

TEST(BoundaryInteriorTest, PlusShapeOnSquare) {
  auto f = box<Z2>(Z2{0, 0}, Z2{4, 4});
  auto bi = boundary_interior(f, plus_shape<Z2>());
  // Oracle: a cell is interior iff all four neighbours are inside.
  std::size_t frame = 0;
  for (const auto& g : f) {
    bool inner = g[0] > 0 && g[0] < 3 && g[1] > 0 && g[1] < 3;
    EXPECT_EQ(bi.interior.contains(g), inner);
    frame += inner ? 0 : 1;
  }
  EXPECT_EQ(frame, 12u);
  EXPECT_EQ(bi.boundary.size(), 12u);
  EXPECT_EQ(bi.interior, box<Z2>(Z2{1, 1}, Z2{3, 3}));
}

TEST(InvarianceDefectTest, Examples) {
  EXPECT_EQ(invariance_defect(interval(0, 10), kUnit), Rational(2, 10));
  FiniteSet<Z1> e{Z1{0}};
  EXPECT_EQ(invariance_defect(e, e), Rational(0));
  EXPECT_EQ(invariance_defect(box<Z2>(Z2{0, 0}, Z2{10, 10}), plus_shape<Z2>()), Rational(40, 100));
  EXPECT_THROW(invariance_defect(FiniteSet<Z1>{}, kUnit), PreconditionError);
}

TEST(InvarianceTransferTest, Examples) {
  auto r = check_invariance_transfer(kUnit, interval(0, 10), interval(0, 10));
  EXPECT_EQ(r.lhs, Rational(2));
  EXPECT_EQ(r.rhs, Rational(2));
  EXPECT_TRUE(r.holds);
  r = check_invariance_transfer(kUnit, interval(0, 10), interval(0, 11));
  EXPECT_EQ(r.lhs, Rational(2));
  EXPECT_EQ(r.rhs, Rational(5));
  EXPECT_TRUE(r.holds);
  r = check_invariance_transfer(kUnit, FiniteSet<Z1>{}, FiniteSet<Z1>{});
  EXPECT_EQ(r.lhs, Rational(0));
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(check_invariance_transfer(interval(1, 3), interval(0, 3), interval(0, 3)), PreconditionError);
}

TEST(BoundaryBoundTest, Examples) {
  auto r = check_boundary_bound(interval(0, 10), kUnit);
  EXPECT_EQ(r.lhs, Rational(2));
  EXPECT_EQ(r.rhs, Rational(6));
  r = check_boundary_bound(box<Z2>(Z2{0, 0}, Z2{10, 10}), plus_shape<Z2>());
  EXPECT_EQ(r.lhs, Rational(36));
  EXPECT_EQ(r.rhs, Rational(200));
  EXPECT_TRUE(r.holds);
  FiniteSet<Z1> e{Z1{0}};
  r = check_boundary_bound(e, e);
  EXPECT_EQ(r.lhs, Rational(0));
  EXPECT_EQ(r.rhs, Rational(0));
  EXPECT_TRUE(r.holds);
}

TEST(SeparationTest, Examples) {
  EXPECT_TRUE(is_separated(FiniteSet<Z1>{Z1{0}, Z1{5}, Z1{10}}, interval(0, 5)));
  EXPECT_FALSE(is_separated(FiniteSet<Z1>{Z1{0}, Z1{3}}, interval(0, 5)));
  EXPECT_TRUE(is_separated(FiniteSet<Z1>{}, interval(0, 5)));
}

TEST(DensityTest, WindowAndProfile) {
  auto c = multiples(5, 0, 100);
  EXPECT_EQ(density_on_window(c, interval(0, 100)), Rational(1, 5));
  EXPECT_EQ(density_on_window(FiniteSet<Z1>{}, interval(0, 100)), Rational(0));
  StoredSet<Z1> stored(interval(0, 100), c);
  auto prof = upper_density_profile(stored, 2);
  ASSERT_EQ(prof.size(), 2u);
  EXPECT_EQ(prof[1].ratio, Rational(1, 5));
  EXPECT_EQ(prof[0].ratio, Rational(1, 3));
  EXPECT_THROW(upper_density_profile(stored, 60), ExtentError);
}

TEST(DensityTest, StoredSetRefusesToExtrapolate) {
  StoredSet<Z1> finite(interval(0, 10), multiples(5, 0, 10));
  EXPECT_TRUE(finite.contains(Z1{5}));
  EXPECT_THROW(finite.contains(Z1{15}), ExtentError);
  StoredSet<Z1> periodic(interval(0, 10), multiples(5, 0, 10), true);
  EXPECT_TRUE(periodic.contains(Z1{15}));
  EXPECT_TRUE(periodic.contains(Z1{-5}));
  EXPECT_FALSE(periodic.contains(Z1{-4}));
}

TEST(DensityBoundTest, Examples) {
  auto f = interval(0, 100);
  FiniteSet<Z1> m{Z1{0}, Z1{1}};
  auto l = interval(0, 5);
  auto r = check_density_bound(f, m, l, multiples(5, -10, 110));
  EXPECT_EQ(r.lhs, Rational(40, 100));
  EXPECT_EQ(r.rhs, Rational(1, 2));
  EXPECT_TRUE(r.holds);
  r = check_density_bound(f, m, l, FiniteSet<Z1>{});
  EXPECT_EQ(r.lhs, Rational(0));
  EXPECT_TRUE(r.holds);
  FiniteSet<Z1> e{Z1{0}};
  r = check_density_bound(f, e, e, multiples(3, 0, 100));
  EXPECT_EQ(r.lhs, Rational(34, 100));
  EXPECT_GE(r.rhs, Rational(1));
  EXPECT_THROW(check_density_bound(f, FiniteSet<Z1>{Z1{0}, Z1{7}}, l, FiniteSet<Z1>{}), PreconditionError);
  EXPECT_THROW(check_density_bound(f, FiniteSet<Z1>{Z1{1}}, l, FiniteSet<Z1>{}), PreconditionError);
  EXPECT_THROW(check_density_bound(f, m, l, FiniteSet<Z1>{Z1{0}, Z1{3}}), PreconditionError);
}

TEST(PropertyTest, BoundaryInteriorPartition) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Z2> fv, kv{Z2{0, 0}};
    for (int i = 0; i < 30; ++i) fv.push_back(Z2{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)});
    for (int i = 0; i < 3; ++i) kv.push_back(Z2{static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2});
    FiniteSet<Z2> f(fv), k(kv);
    auto bi = boundary_interior(f, k);
    EXPECT_TRUE(disjoint(bi.boundary, bi.interior));
    EXPECT_EQ(unite(bi.boundary, bi.interior), f);
  }
}

TEST(PropertyTest, InteriorContainmentExhaustiveSmall) {
  // Every subset F of [0,6) and K in a few small windows.
  std::vector<FiniteSet<Z1>> ks{FiniteSet<Z1>{Z1{0}}, kUnit, FiniteSet<Z1>{Z1{0}, Z1{2}}, interval(-2, 1)};
  for (const auto& k : ks)
    for (unsigned mask = 1; mask < 64; ++mask) {
      std::vector<Z1> fv;
      for (int i = 0; i < 6; ++i)
        if (mask >> i & 1U) fv.push_back(Z1{i});
      EXPECT_FALSE(interior_containment_violation(FiniteSet<Z1>(fv), k).has_value());
    }
}

TEST(PropertyTest, BoxesAreFolnerForSmallK) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Z2> kv{Z2{0, 0}};
    for (int i = 0; i < 4; ++i) kv.push_back(Z2{static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3});
    FiniteSet<Z2> k(kv);
    Rational prev = invariance_defect(folner_box<Z2>(4), k);
    for (int n = 5; n <= 64; n += 3) {
      Rational d = invariance_defect(folner_box<Z2>(n), k);
      EXPECT_LE(d, prev);
      prev = d;
    }
    EXPECT_LT(prev, Rational(1, 5));
  }
}

TEST(PropertyTest, SeparatedSetsHaveBoundedDensity) {
  auto l = interval(0, 7);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Z1> cv;
    int x = static_cast<int>(rng() % 7) - 40;
    while (x < 60) {
      cv.push_back(Z1{x});
      x += 7 + static_cast<int>(rng() % 4);
    }
    FiniteSet<Z1> c(cv);
    ASSERT_TRUE(is_separated(c, l));
    auto f = folner_box<Z1>(20);
    auto bound = check_density_bound(f, FiniteSet<Z1>{Z1{0}}, l, c);
    EXPECT_TRUE(bound.holds);
    EXPECT_LE(density_on_window(c, f), bound.rhs);
  }
}

TEST(RoleTest, NamesRoundTrip) {
  for (Role r : {Role::generic, Role::k_window, Role::l_separator, Role::m_marker_shape, Role::s_tile_shape,
                 Role::f_test_window})
    EXPECT_EQ(role_from_name(role_name(r)), r);
  EXPECT_THROW(role_from_name("bogus"), PreconditionError);
}

TEST(LemmaSuiteTest, SeededInstancesHold) {
  auto z = run_lemma_suite<Z1>(200, 1);
  auto z2 = run_lemma_suite<Z2>(200, 2);
  for (const auto* r : {&z, &z2}) {
    EXPECT_TRUE(r->pass());
    EXPECT_EQ(r->transfer.checked, 200u);
    EXPECT_EQ(r->containment.checked, 400u);
    EXPECT_GT(r->density.checked, 150u);
  }
  EXPECT_EQ(run_lemma_suite<Z1>(20, 9).transfer.checked, 20u);
}

}  // namespace
}  // namespace symdyn
