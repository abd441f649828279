#include <gtest/gtest.h>

#include "mpbound/agreement.hpp"

using namespace mpbound;

namespace {

std::vector<Elem> bits(const std::string& s) {
  std::vector<Elem> out;
  for (char c : s) out.push_back(Elem{static_cast<std::uint32_t>(c - '0')});
  return out;
}

std::vector<Elem> word(std::uint64_t code, std::size_t t, std::uint64_t p) {
  std::vector<Elem> v(t);
  for (auto& e : v) {
    e.code = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return v;
}

/// Visits every k-multiset of words in GF(p)^t (as nondecreasing index tuples).
template <class Visit>
void for_each_multiset(std::uint64_t p, std::size_t t, std::size_t k, Visit visit) {
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < t; ++i) words *= p;
  std::vector<std::uint64_t> idx(k, 0);
  std::vector<std::vector<Elem>> v(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) v[i] = word(idx[i], t, p);
    visit(v);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] + 1 == words) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[pos - 1];
  }
}

}  // namespace

TEST(Agreement, PairExample) {
  const std::vector<std::vector<Elem>> v{bits("000000"), bits("111111"), bits("110100")};
  const auto best = best_agreeing_pair(v);
  EXPECT_EQ(best.count, 3u);
  EXPECT_TRUE(pair_bound_holds(best.count, 6, 2, 3));
  const std::vector<std::vector<Elem>> same(3, bits("1011"));
  EXPECT_EQ(best_agreeing_pair(same).count, 4u);
  const std::vector<std::vector<Elem>> comp{bits("0101"), bits("1010"), bits("0101"), bits("1010")};
  const auto c = best_agreeing_pair(comp);
  EXPECT_EQ(c.count, 4u);
  EXPECT_EQ(c.i, 0u);
  EXPECT_EQ(c.j, 2u);
}

TEST(Agreement, TiesGoToSmallestTuple) {
  const std::vector<std::vector<Elem>> v{bits("00"), bits("01"), bits("10"), bits("11")};
  const auto p = best_agreeing_pair(v);
  EXPECT_EQ(p.i, 0u);
  EXPECT_EQ(p.j, 1u);
  const auto t = best_agreeing_triple(v);
  EXPECT_EQ(t.i, 0u);
  EXPECT_EQ(t.j, 1u);
  EXPECT_EQ(t.l, 2u);
}

TEST(Agreement, Preconditions) {
  const std::vector<std::vector<Elem>> one{bits("01")};
  EXPECT_THROW(best_agreeing_pair(one), DimensionError);
  const std::vector<std::vector<Elem>> ragged{bits("01"), bits("011"), bits("1")};
  EXPECT_THROW(best_agreeing_pair(ragged), DimensionError);
  EXPECT_THROW(best_agreeing_triple(std::vector<std::vector<Elem>>{bits("0"), bits("1")}), DimensionError);
}

TEST(Agreement, PlotkinValues) {
  EXPECT_EQ(plotkin_min_length(4, 3), Rational(24, 5));
  EXPECT_EQ(ceil_rational(plotkin_min_length(4, 3)), 5);
  EXPECT_THROW(plotkin_min_length(4, 2), PreconditionError);
  for (std::int64_t k = 3; k < 50; ++k) EXPECT_EQ(plotkin_min_length(9, k, 2), plotkin_min_length(9, k));
  EXPECT_THROW(plotkin_min_length(4, 3, 3), PreconditionError);
  EXPECT_EQ(plotkin_min_length(4, 4, 3), Rational(48, 11));
  // the bound approaches 2N from below as k grows
  const Rational big = plotkin_min_length(16, 1000000);
  EXPECT_LT(big, Rational(32));
  EXPECT_GT(big, Rational(3199, 100));
}

TEST(Agreement, CeilRational) {
  EXPECT_EQ(ceil_rational(Rational(5)), 5);
  EXPECT_EQ(ceil_rational(Rational(11, 2)), 6);
  EXPECT_EQ(ceil_rational(Rational(1, 3)), 1);
}

TEST(Agreement, PlotkinIsSoundForExhaustiveBinaryCodes) {
  // any k words at pairwise distance >= N need length >= the bound
  for (std::size_t t = 1; t <= 4; ++t)
    for (std::size_t k = 3; k <= 4; ++k)
      for_each_multiset(2, t, k, [&](const std::vector<std::vector<Elem>>& v) {
        const std::size_t n = min_pairwise_distance(v);
        if (n == 0) return;
        ASSERT_TRUE(check_pairwise_distance(v, n));
        ASSERT_GE(Rational(static_cast<std::int64_t>(t)), plotkin_min_length(static_cast<std::int64_t>(n), k));
      });
}

TEST(Agreement, PlotkinIsSoundOverGf3) {
  for (std::size_t t = 1; t <= 3; ++t)
    for_each_multiset(3, t, 4, [&](const std::vector<std::vector<Elem>>& v) {
      const std::size_t n = min_pairwise_distance(v);
      if (n == 0) return;
      ASSERT_GE(Rational(static_cast<std::int64_t>(t)), plotkin_min_length(static_cast<std::int64_t>(n), 4, 3));
    });
}

TEST(Agreement, PairBoundExhaustive) {
  for (std::size_t t = 1; t <= 5; ++t)
    for (std::size_t k = 3; k <= 4; ++k)
      for_each_multiset(2, t, k, [&](const std::vector<std::vector<Elem>>& v) {
        ASSERT_TRUE(pair_bound_holds(best_agreeing_pair(v).count, t, 2, k));
      });
  for (std::size_t t = 1; t <= 3; ++t)
    for_each_multiset(3, t, 4, [&](const std::vector<std::vector<Elem>>& v) {
      ASSERT_TRUE(pair_bound_holds(best_agreeing_pair(v).count, t, 3, 4));
    });
}

TEST(Agreement, TripleBoundExhaustive) {
  for (std::size_t t = 1; t <= 4; ++t)
    for_each_multiset(2, t, 5, [&](const std::vector<std::vector<Elem>>& v) {
      ASSERT_TRUE(triple_bound_holds(best_agreeing_triple(v).count, t, 2, 5));
    });
}

TEST(Agreement, BoundsOnRandomInstances) {
  Rng rng(12);
  for (std::uint64_t p : {2, 3})
    for (int it = 0; it < 2000; ++it) {
      const std::size_t t = 1 + rng.below(12);
      const std::size_t k = 2 * p + 1 + rng.below(4);
      std::vector<std::vector<Elem>> v(k, std::vector<Elem>(t));
      for (auto& w : v)
        for (auto& e : w) e.code = static_cast<std::uint32_t>(rng.below(p));
      ASSERT_TRUE(pair_bound_holds(best_agreeing_pair(v).count, t, p, k));
      ASSERT_TRUE(triple_bound_holds(best_agreeing_triple(v).count, t, p, k));
    }
}
