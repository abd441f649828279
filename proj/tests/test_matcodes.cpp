#include <gtest/gtest.h>

#include "mpbound/matcodes.hpp"

using namespace mpbound;

namespace {

const FieldCtx F2 = make_context(2, 1);

std::vector<Elem> ints(FieldCtx f, std::initializer_list<std::int64_t> v) {
  std::vector<Elem> out;
  for (auto x : v) out.push_back(f.from_int(x));
  return out;
}

}  // namespace

TEST(Matcodes, NaiveEncodingOfUnit) {
  const auto code = code_from_bilinear(naive_decomp(2, F2));
  const auto c = encode(code, Mat::unit(F2, 2, 2, 0, 0));
  EXPECT_EQ(c, ints(F2, {1, 0, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(weight(c), 2u);
}

TEST(Matcodes, WeightExamples) {
  const auto naive = code_from_bilinear(naive_decomp(2, F2));
  EXPECT_EQ(weight(encode(naive, Mat::identity(F2, 2))), 4u);
  EXPECT_EQ(weight(encode(naive, Mat(F2, 2, 2))), 0u);
  const auto strassen = code_from_bilinear(strassen_decomp(F2));
  EXPECT_EQ(weight(encode(strassen, Mat::unit(F2, 2, 2, 0, 0))), 4u);
  const auto quad = code_from_quadratic(to_quadratic(naive_decomp(2, F2)));
  EXPECT_EQ(weight(encode(quad, Mat::identity(F2, 2))), 4u);
  EXPECT_EQ(weight(encode(quad, Mat(F2, 2, 2))), 0u);
}

TEST(Matcodes, HammingRejectsLengthMismatch) {
  EXPECT_EQ(hamming(ints(F2, {1, 0, 1}), ints(F2, {1, 1, 0})), 2u);
  EXPECT_THROW(hamming(ints(F2, {1}), ints(F2, {1, 0})), DimensionError);
}

TEST(Matcodes, NaiveExhaustiveReport) {
  const auto r = check_rank_distance(code_from_bilinear(naive_decomp(2, F2)), Exhaustive{});
  EXPECT_EQ(r.checked, 16u);
  EXPECT_TRUE(r.ok());
  ASSERT_TRUE(r.min_ratio);
  EXPECT_EQ(*r.min_ratio, Rational(1));
}

TEST(Matcodes, DroppedFormBreaksProperty) {
  auto code = code_from_bilinear(naive_decomp(2, F2));
  code.forms.erase(code.forms.begin());
  const auto r = check_rank_distance(code, Exhaustive{});
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.violations.empty());
  const auto& v = r.violations.front();
  EXPECT_LT(v.weight, 2 * v.rank);
  EXPECT_EQ(weight(encode(code, v.matrix)), v.weight);
}

TEST(Matcodes, ConstructorsRejectNonVerifyingCircuits) {
  auto d = naive_decomp(2, F2);
  d.triples.pop_back();
  EXPECT_THROW(code_from_bilinear(d), PreconditionError);
  EXPECT_THROW(code_from_quadratic(to_quadratic(d)), PreconditionError);
}

TEST(Matcodes, RankDistanceOnAllSmallCodes) {
  for (std::uint64_t p : {2, 3}) {
    const FieldCtx f = make_context(p, 1);
    for (const auto& d : {naive_decomp(2, f), strassen_decomp(f)}) {
      EXPECT_TRUE(check_rank_distance(code_from_bilinear(d), Exhaustive{}).ok());
      EXPECT_TRUE(check_rank_distance(code_from_quadratic(to_quadratic(d)), Exhaustive{}).ok());
    }
    const auto d3 = naive_decomp(3, f);
    EXPECT_TRUE(check_rank_distance(code_from_bilinear(d3), Sampled{10000, 1}).ok());
    EXPECT_TRUE(check_rank_distance(code_from_quadratic(to_quadratic(d3)), Sampled{10000, 2}).ok());
  }
}

TEST(Matcodes, EncodeIsLinearAndDistancesRespectRank) {
  Rng rng(8);
  for (std::uint64_t p : {2, 3}) {
    const FieldCtx f = make_context(p, 1);
    const auto code = code_from_bilinear(strassen_decomp(f));
    for (int i = 0; i < 1000; ++i) {
      const Mat a = random_matrix(f, 2, 2, rng), b = random_matrix(f, 2, 2, rng);
      const auto ea = encode(code, a), eb = encode(code, b), es = encode(code, a + b);
      for (std::size_t r = 0; r < es.size(); ++r) ASSERT_EQ(es[r], f.add(ea[r], eb[r]));
      ASSERT_GE(hamming(ea, eb), 2 * rank(a - b));
    }
  }
}

TEST(Matcodes, TraceIdentity) {
  const auto naive = to_quadratic(naive_decomp(2, F2));
  EXPECT_TRUE(trace_identity_check(naive, Exhaustive{}));
  EXPECT_TRUE(trace_identity_check(to_quadratic(strassen_decomp(F2)), Sampled{1000, 0}));
  EXPECT_TRUE(trace_identity_check(to_quadratic(naive_decomp(3, make_context(3, 1))), Sampled{1000, 0}));
  auto broken = naive;
  broken.triples[0].alpha[0] = F2.zero();
  EXPECT_FALSE(trace_identity_check(broken, Exhaustive{}));
}

TEST(Matcodes, DerivativeSpanExamples) {
  const auto q = to_quadratic(naive_decomp(2, F2));
  const auto zero = derivative_span_check(q, Mat(F2, 2, 2));
  EXPECT_EQ(zero.lhs_dim, 0u);
  EXPECT_TRUE(zero.ok);
  const auto id = derivative_span_check(q, Mat::identity(F2, 2));
  EXPECT_EQ(id.lhs_dim, 8u);
  EXPECT_EQ(id.k, 4u);
  EXPECT_TRUE(id.ok);
}

TEST(Matcodes, DerivativeSpanExhaustive) {
  for (std::uint64_t p : {2, 3}) {
    const FieldCtx f = make_context(p, 1);
    for (const auto& d : {naive_decomp(2, f), strassen_decomp(f)}) {
      const auto q = to_quadratic(d);
      for (std::uint64_t i = 0; i < *matrix_count(f, 2, 2); ++i) {
        const Mat z0 = matrix_from_index(f, 2, 2, i);
        const auto r = derivative_span_check(q, z0);
        ASSERT_EQ(r.lhs_dim, 4 * rank(z0));
        ASSERT_EQ(r.lhs_dim, r.expected_dim);
        ASSERT_TRUE(r.derivatives_match);
        ASSERT_TRUE(r.contained);
        ASSERT_LE(r.lhs_dim, r.gate_span_dim);
        ASSERT_TRUE(r.ok);
      }
    }
  }
}
