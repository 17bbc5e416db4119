#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "symdyn/catalog.hpp"
#include "symdyn/patterns.hpp"

namespace symdyn {
namespace {

// Brute force: all binary words of length n without "11".
std::uint64_t brute_golden(int n) {
  std::uint64_t c = 0;
  for (std::uint64_t w = 0; w < (1ULL << n); ++w)
    if ((w & (w >> 1)) == 0) ++c;
  return c;
}

// Brute force: independent sets of the n x n grid graph.
std::uint64_t brute_hard_square(int n) {
  std::uint64_t c = 0;
  const int cells = n * n;
  for (std::uint64_t w = 0; w < (1ULL << cells); ++w) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (!(w >> (i * n + j) & 1U)) continue;
        if (i + 1 < n && (w >> ((i + 1) * n + j) & 1U)) ok = false;
        if (j + 1 < n && (w >> (i * n + j + 1) & 1U)) ok = false;
      }
    c += ok ? 1 : 0;
  }
  return c;
}

Configuration<Z1> cfg1(const std::vector<Symbol>& v, int start = 0) {
  return Configuration<Z1>(interval(start, start + static_cast<int>(v.size())), v);
}

TEST(AlphabetTest, Invariants) {
  EXPECT_THROW(Alphabet(std::vector<std::string>{}), PreconditionError);
  EXPECT_THROW(Alphabet({"a", "a"}), PreconditionError);
  EXPECT_THROW(Alphabet({"a", "b"}, 0, 0), PreconditionError);
  auto a = Alphabet::numeric(3);
  EXPECT_EQ(a.size(), 3);
  EXPECT_EQ(a.index_of("2"), 2);
  EXPECT_EQ(a.zero(), 0);
  EXPECT_EQ(a.one(), 1);
  EXPECT_FALSE(Alphabet::numeric(1).one().has_value());
}

TEST(PatternTest, RestrictTranslateMerge) {
  Pattern<Z1> p(interval(0, 4), {0, 1, 0, 1});
  EXPECT_EQ(p.restrict(interval(1, 3)), Pattern<Z1>(interval(1, 3), {1, 0}));
  EXPECT_EQ(p.translate(Z1{5}).at(Z1{6}), 1);
  EXPECT_THROW(p.restrict(interval(3, 6)), PreconditionError);
  auto m = merge(p, Pattern<Z1>(interval(3, 5), {1, 1}));
  EXPECT_EQ(m.labels(), (std::vector<Symbol>{0, 1, 0, 1, 1}));
  EXPECT_THROW(merge(p, Pattern<Z1>(interval(3, 5), {0, 1})), PreconditionError);
}

TEST(SftTest, Validation) {
  auto k = interval(-1, 2);
  Pattern<Z1> far(FiniteSet<Z1>{Z1{0}, Z1{5}}, {1, 1});
  EXPECT_THROW(Sft<Z1>(Alphabet::numeric(2), std::vector<Pattern<Z1>>{far}, k), PreconditionError);
  EXPECT_THROW(Sft<Z1>(Alphabet::numeric(2), std::vector<Pattern<Z1>>{}, interval(0, 2)), PreconditionError);
  EXPECT_THROW(Sft<Z1>(Alphabet::numeric(2), std::vector<Pattern<Z1>>{Pattern<Z1>(interval(0, 1), {2})}, k),
               PreconditionError);
}

TEST(EnumerateTest, SpecExamples) {
  EXPECT_EQ(enumerate_patterns(full_shift<Z1>(2), interval(0, 2)).size(), 4u);
  auto gm = enumerate_patterns(golden_mean_shift(), interval(0, 3));
  EXPECT_EQ(gm.size(), 5u);
  EXPECT_TRUE(std::is_sorted(gm.begin(), gm.end()));
  EXPECT_EQ(count_patterns(hard_square_shift(), box<Z2>(Z2{0, 0}, Z2{4, 4})), brute_hard_square(4));
  EXPECT_EQ(brute_hard_square(4), 1234u);
  EXPECT_EQ(enumerate_patterns(hard_square_shift(), box<Z2>(Z2{0, 0}, Z2{4, 4})).size(), 1234u);
}

TEST(EnumerateTest, GoldenMeanMatchesBruteForce) {
  for (int n = 1; n <= 18; ++n) {
    EXPECT_EQ(count_patterns(golden_mean_shift(), interval(0, n)), brute_golden(n)) << n;
    EXPECT_EQ(enumerate_patterns(golden_mean_shift(), interval(0, n)).size(), brute_golden(n)) << n;
  }
}

TEST(EnumerateTest, CapIsEnforced) {
  EnumerationOptions opt;
  opt.cap = 10;
  EXPECT_THROW(enumerate_patterns(full_shift<Z1>(2), interval(0, 8), CountMode::local(), opt), ResourceError);
  EXPECT_THROW(count_patterns(full_shift<Z1>(2), interval(0, 8), CountMode::local(), opt), ResourceError);
}

TEST(EnumerateTest, ModesAreMonotone) {
  // Sink-like system where extendability matters: forbid "10" and "2" followed by anything but "2".
  auto k = interval(-1, 2);
  std::vector<Pattern<Z1>> f{Pattern<Z1>(interval(0, 2), {2, 0}), Pattern<Z1>(interval(0, 2), {2, 1}),
                             Pattern<Z1>(interval(0, 2), {0, 2})};
  Sft<Z1> s(Alphabet::numeric(3), f, k);
  auto F = interval(0, 4);
  auto local = count_patterns(s, F, CountMode::local());
  auto e1 = count_patterns(s, F, CountMode::extendable(1));
  auto e2 = count_patterns(s, F, CountMode::extendable(2));
  EXPECT_GE(local, e1);
  EXPECT_GE(e1, e2);
  // The line count of extendable words agrees with filtering the enumeration one word at a time.
  for (int m : {1, 2}) {
    std::uint64_t n = 0;
    for (const auto& p : enumerate_patterns(s, F)) n += is_extendable(s, p, m);
    EXPECT_EQ(count_patterns(s, F, CountMode::extendable(m)), n) << m;
  }
  FiniteSet<Z1> gappy{Z1{0}, Z1{2}, Z1{5}};
  std::uint64_t g = 0;
  for (const auto& p : enumerate_patterns(s, gappy)) g += is_extendable(s, p, 1);
  EXPECT_EQ(count_patterns(s, gappy, CountMode::extendable(1)), g);
  EXPECT_EQ(CountMode::extendable(3).tag(), "extendable(3)");
  EXPECT_EQ(CountMode::local().tag(), "locally_admissible");
}

TEST(EnumerateTest, ShiftEquivariance) {
  auto s = golden_mean_shift();
  auto base = enumerate_patterns(s, interval(0, 6));
  auto moved = enumerate_patterns(s, interval(7, 13));
  ASSERT_EQ(base.size(), moved.size());
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(base[i].translate(Z1{7}), moved[i]);
  auto hs = hard_square_shift();
  auto b2 = enumerate_patterns(hs, box<Z2>(Z2{0, 0}, Z2{2, 3}));
  auto m2 = enumerate_patterns(hs, box<Z2>(Z2{-4, 5}, Z2{-2, 8}));
  ASSERT_EQ(b2.size(), m2.size());
  for (std::size_t i = 0; i < b2.size(); ++i) EXPECT_EQ(b2[i].translate(Z2{-4, 5}), m2[i]);
}

TEST(EntropyTest, Examples) {
  auto e = entropy_estimate(full_shift<Z1>(2), interval(0, 4));
  EXPECT_EQ(e.count, 16u);
  EXPECT_NEAR(e.h, std::log(2.0), 1e-12);
  e = entropy_estimate(golden_mean_shift(), interval(0, 5));
  EXPECT_EQ(e.count, 13u);
  EXPECT_NEAR(e.h, std::log(13.0) / 5, 1e-12);
  EXPECT_EQ(e.mode.tag(), "locally_admissible");
  const double phi = std::log((1 + std::sqrt(5.0)) / 2);
  double prev = 10;
  for (int n = 4; n <= 24; n += 4) {
    double h = entropy_estimate(golden_mean_shift(), interval(0, n)).h;
    EXPECT_LT(h, prev);
    EXPECT_GT(h, phi);
    prev = h;
  }
  EXPECT_NEAR(prev, phi, 0.02);
}

TEST(TransferTest, SpectralEntropy) {
  EXPECT_NEAR(entropy_1d(golden_mean_shift()), std::log((1 + std::sqrt(5.0)) / 2), 1e-9);
  EXPECT_NEAR(entropy_1d(full_shift<Z1>(3)), std::log(3.0), 1e-9);
  EXPECT_NEAR(entropy_1d(subalphabet_shift<Z1>(3, {0, 1})), std::log(2.0), 1e-9);
}

TEST(TransferTest, CodecRankUnrankRoundTrip) {
  auto s = golden_mean_shift();
  FiniteSet<Z1> shape{Z1{0}, Z1{1}, Z1{3}, Z1{4}, Z1{5}, Z1{9}};
  LexCodec1D codec(s, shape);
  auto all = enumerate_patterns(s, shape);
  ASSERT_EQ(codec.count(), BigInt(all.size()));
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(codec.rank(all[i]), BigInt(i));
    EXPECT_EQ(codec.unrank(BigInt(i)), all[i]);
  }
  EXPECT_THROW(codec.rank(Pattern<Z1>(shape, {1, 1, 0, 0, 0, 0})), PreconditionError);
  EXPECT_THROW(codec.unrank(codec.count()), PreconditionError);
  EXPECT_EQ(count_interval(s, 60), BigInt("4052739537881"));
}

TEST(SearchTest, LineAndDfsAgree) {
  // Same problem through the line engine and through the DFS engine (Z^2 strip of height 1).
  auto s1 = golden_mean_shift();
  std::vector<Pattern<Z2>> f{Pattern<Z2>(FiniteSet<Z2>{Z2{0, 0}, Z2{1, 0}}, {1, 1})};
  Sft<Z2> s2(Alphabet::numeric(2), f, centered_box<Z2>(1), centered_box<Z2>(1));
  Search<Z1> a(s1, interval(0, 12));
  Search<Z2> b(s2, box<Z2>(Z2{0, 0}, Z2{12, 1}));
  a.fix(Z1{3}, 1);
  b.fix(Z2{3, 0}, 1);
  a.restrict(Z1{9}, {1});
  b.restrict(Z2{9, 0}, {1});
  EXPECT_EQ(a.count(), b.count());
  EXPECT_EQ(a.first()->labels(), b.first()->labels());
}

TEST(SearchTest, PeriodicModeWraps) {
  auto s = golden_mean_shift();
  Search<Z1> p(s, interval(0, 5), BoundaryMode::periodic);
  // Cyclic binary words of length 5 without adjacent 1s: Lucas number L5 = 11.
  EXPECT_EQ(p.count(), 11u);
  Search<Z1> q(s, interval(0, 4), BoundaryMode::periodic);
  q.fix(Z1{0}, 1);
  q.fix(Z1{3}, 1);
  EXPECT_FALSE(q.exists());
}

TEST(SearchTest, SamplesAreAdmissibleAndSeedStable) {
  auto s = golden_mean_shift();
  std::mt19937_64 r1(5), r2(5);
  auto a = sample_configuration(s, interval(0, 200), r1);
  auto b = sample_configuration(s, interval(0, 200), r2);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
  EXPECT_TRUE(is_locally_admissible(s, *a));
  std::mt19937_64 r3(9);
  auto c = sample_configuration(hard_square_shift(), box<Z2>(Z2{0, 0}, Z2{10, 10}), r3);
  ASSERT_TRUE(c);
  EXPECT_TRUE(is_locally_admissible(hard_square_shift(), *c));
}

TEST(SearchTest, NodeLimit) {
  SearchLimits lim;
  lim.node_limit = 50;
  Search<Z2> s(full_shift<Z2>(2), box<Z2>(Z2{0, 0}, Z2{4, 4}), BoundaryMode::free, lim);
  EXPECT_THROW(s.count(), ResourceError);
}

TEST(ExciseTest, IdenticalInputs) {
  auto s = golden_mean_shift();
  auto y = cfg1({0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0});
  EXPECT_EQ(excise(s, y, y, interval(5, 15)), y);
}

TEST(ExciseTest, MixesWhenBoundaryAgrees) {
  auto s = golden_mean_shift();
  std::vector<Symbol> a(20, 0), zeros(20, 0);
  for (int i = 7; i < 13; ++i) a[static_cast<std::size_t>(i)] = i % 2;
  for (int i = 0; i < 20; i += 3) zeros[static_cast<std::size_t>(i)] = (i < 5 || i >= 15) ? 1 : 0;
  auto y1 = cfg1(a);
  auto y2 = cfg1(zeros);
  auto f = interval(5, 15);
  auto y = excise(s, y1, y2, f);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(y.at(Z1{i}), (i >= 5 && i < 15) ? y1.at(Z1{i}) : y2.at(Z1{i}));
  EXPECT_TRUE(is_locally_admissible(s, y));
}

TEST(ExciseTest, BoundaryMismatch) {
  auto s = golden_mean_shift();
  std::vector<Symbol> alt(20), zeros(20, 0);
  for (int i = 0; i < 20; ++i) alt[static_cast<std::size_t>(i)] = i % 2;
  EXPECT_THROW(excise(s, cfg1(alt), cfg1(zeros), interval(5, 15)), HypothesisError);
  EXPECT_THROW(excise(s, cfg1(alt), cfg1(zeros), interval(0, 15)), PreconditionError);
}

TEST(GlueTest, Examples) {
  auto fs = full_shift<Z1>(2);
  auto g = glue(fs, Pattern<Z1>(interval(0, 1), {1}), Pattern<Z1>(interval(3, 4), {1}), interval(0, 5));
  EXPECT_EQ(g.labels(), (std::vector<Symbol>{1, 0, 0, 1, 0}));
  auto gm = golden_mean_shift();
  auto r = glue(gm, Pattern<Z1>(interval(0, 1), {1}), Pattern<Z1>(interval(3, 4), {1}), interval(0, 4));
  EXPECT_EQ(r.labels(), (std::vector<Symbol>{1, 0, 0, 1}));
  EXPECT_THROW(glue(gm, Pattern<Z1>(interval(0, 1), {1}), Pattern<Z1>(interval(1, 2), {1}), interval(0, 4)),
               HypothesisError);
  EXPECT_THROW(glue(sink_shift(), Pattern<Z1>(interval(0, 1), {1}), Pattern<Z1>(interval(3, 4), {0}), interval(0, 4)),
               PreconditionError);
  auto sink_mix = sink_shift().with_mix(interval(-1, 2));
  EXPECT_THROW(glue(sink_mix, Pattern<Z1>(interval(0, 1), {1}), Pattern<Z1>(interval(3, 4), {0}), interval(0, 4)),
               NoSolutionError);
}

TEST(IrreducibilityTest, Examples) {
  auto r = check_strong_irreducibility(full_shift<Z1>(2), FiniteSet<Z1>{Z1{0}}, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.scope, "verified up to radius 2");
  r = check_strong_irreducibility(golden_mean_shift(), interval(-1, 2), 3);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.pairs_tested, 100u);
  r = check_strong_irreducibility(sink_shift(), interval(-1, 2), 2);
  ASSERT_FALSE(r.pass);
  ASSERT_TRUE(r.counterexample.has_value());
  // Counterexample: a 1 somewhere left of a 0.
  const auto& [p1, p2] = *r.counterexample;
  auto both = merge(p1, p2);
  int first_one = INT32_MAX, last_zero = INT32_MIN;
  for (std::size_t i = 0; i < both.size(); ++i) {
    if (both.labels()[i] == 1) first_one = std::min(first_one, both.shape()[i][0]);
    else last_zero = std::max(last_zero, both.shape()[i][0]);
  }
  EXPECT_LT(first_one, last_zero);
  // Golden mean with K={0} is not enough: adjacent 1s cannot be glued.
  EXPECT_FALSE(check_strong_irreducibility(golden_mean_shift(), FiniteSet<Z1>{Z1{0}}, 1).pass);
  EXPECT_TRUE(check_strong_irreducibility(hard_square_shift(), plus_shape<Z2>(), 1).pass);
}

TEST(SeparationTest, Examples) {
  auto r = simply_separates(full_shift<Z1>(2), Z1{3}, interval(0, 4));
  EXPECT_TRUE(r.separates);
  ASSERT_TRUE(r.witness);
  EXPECT_NE(r.witness->at(Z1{0}), r.witness->at(Z1{3}));
  auto strip = box<Z2>(Z2{-3, 0}, Z2{4, 2});
  EXPECT_FALSE(simply_separates(strip_equality_shift(), Z2{0, 1}, strip).separates);
  EXPECT_TRUE(simply_separates(strip_equality_shift(), Z2{1, 0}, strip).separates);
  EXPECT_FALSE(simply_separates(one_symbol_shift<Z1>(), Z1{1}, interval(0, 3)).separates);
  EXPECT_THROW(simply_separates(full_shift<Z1>(2), Z1{9}, interval(0, 4)), PreconditionError);
}

TEST(ProductTest, CountsMultiply) {
  auto p = product_system(full_shift<Z1>(2), full_shift<Z1>(3));
  EXPECT_EQ(count_patterns(p, interval(0, 2)), 36u);
  auto q = product_system(golden_mean_shift(), full_shift<Z1>(2));
  EXPECT_EQ(count_patterns(q, interval(0, 3)), 40u);
  auto t = product_system(golden_mean_shift(), one_symbol_shift<Z1>());
  for (int n = 1; n < 10; ++n)
    EXPECT_EQ(count_patterns(t, interval(0, n)), count_patterns(golden_mean_shift(), interval(0, n)));
  auto gg = product_system(golden_mean_shift(), golden_mean_shift());
  for (int n = 1; n < 10; ++n) {
    auto c = count_patterns(golden_mean_shift(), interval(0, n));
    EXPECT_EQ(count_patterns(gg, interval(0, n)), c * c);
  }
  auto hs = product_system(hard_square_shift(), full_shift<Z2>(2));
  EXPECT_EQ(count_patterns(hs, box<Z2>(Z2{0, 0}, Z2{2, 2})), 7u * 16u);
}

TEST(ProductTest, PatternPairing) {
  Pattern<Z1> a(interval(0, 3), {1, 0, 1});
  Pattern<Z1> b(interval(0, 3), {2, 2, 0});
  auto p = product_pattern(a, b, 3);
  EXPECT_EQ(p.labels(), (std::vector<Symbol>{5, 2, 3}));
  auto [x, y] = split_pattern(p, 3);
  EXPECT_EQ(x, a);
  EXPECT_EQ(y, b);
}

}  // namespace
}  // namespace symdyn
