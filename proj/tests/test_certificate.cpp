#include <gtest/gtest.h>

#include "mpbound/certificate.hpp"

using namespace mpbound;

namespace {

const FieldCtx F2 = make_context(2, 1);

std::vector<Mat> all_2x2(FieldCtx f) {
  std::vector<Mat> out;
  for (std::uint64_t i = 0; i < *matrix_count(f, 2, 2); ++i) out.push_back(matrix_from_index(f, 2, 2, i));
  return out;
}

}  // namespace

TEST(Certificate, BlaserOnNaive) {
  const auto cert = blaser_certificate(naive_decomp(2, F2), Mat::unit(F2, 2, 2, 0, 1), Mat::unit(F2, 2, 2, 1, 0));
  EXPECT_EQ(cert.t, 0u);
  EXPECT_EQ(cert.bound, 6);
  EXPECT_TRUE(check_certificate(cert));
}

TEST(Certificate, BlaserRefusesSingularCommutator) {
  const Mat a = Mat::unit(F2, 2, 2, 0, 1);
  EXPECT_THROW(blaser_certificate(strassen_decomp(F2), a, a), PreconditionError);
}

TEST(Certificate, BlaserOnStrassenExhaustive) {
  const auto s = strassen_decomp(F2);
  const auto all = all_2x2(F2);
  std::size_t invertible = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      if (!is_invertible(commutator(a, b))) continue;
      ++invertible;
      const auto cert = blaser_certificate(s, a, b);
      ASSERT_LE(cert.t, 1u);
      ASSERT_LE(cert.bound, 7);
    }
  EXPECT_GT(invertible, 0u);
}

TEST(Certificate, Gf2PipelineNaive2) {
  const auto cert = gf2_pipeline(code_from_bilinear(naive_decomp(2, F2)), 3);
  EXPECT_EQ(cert.bound, 5);
  EXPECT_EQ(cert.m_actual, 8u);
  EXPECT_TRUE(check_certificate(cert));
}

TEST(Certificate, Gf2PipelineStrassen) {
  for (std::uint64_t p : {2, 3, 5}) {
    const FieldCtx f = make_context(p, 1);
    const auto cert = gf2_pipeline(code_from_bilinear(strassen_decomp(f)), std::max<std::size_t>(3, p + 1));
    EXPECT_LE(cert.bound, 7);
    const auto r = check_certificate(cert);
    EXPECT_TRUE(r) << (r.failures.empty() ? "" : r.failures.front());
  }
}

TEST(Certificate, Gf2PipelineQuadraticCode) {
  const auto cert = gf2_pipeline(code_from_quadratic(to_quadratic(naive_decomp(3, F2))), 3);
  EXPECT_LE(cert.bound, 27);
  EXPECT_TRUE(check_certificate(cert));
}

TEST(Certificate, Gf2PipelinePreconditions) {
  const auto code = code_from_bilinear(naive_decomp(2, F2));
  EXPECT_THROW(gf2_pipeline(code, 2), PreconditionError);
  EXPECT_THROW(gf2_pipeline(code_from_bilinear(naive_decomp(2, make_context(3, 1))), 3), PreconditionError);
}

TEST(Certificate, GfpPipelineOddNNamesStep) {
  try {
    gfp_pipeline(naive_decomp(3, make_context(3, 1)), 4, 3);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("k-commutator"), std::string::npos);
  }
}

TEST(Certificate, GfpPipelineNaive4Gf3) {
  const auto cert = gfp_pipeline(naive_decomp(4, make_context(3, 1)), 4, 3);
  EXPECT_LE(cert.bound, 64);
  EXPECT_GE(cert.bound, 24);
  ASSERT_TRUE(cert.inv && cert.commutator && cert.blaser);
  EXPECT_EQ(cert.commutator->vanish_on_identity, cert.inv->vanish_on_c);
  EXPECT_TRUE(check_certificate(cert));
}

TEST(Certificate, TamperingIsDetected) {
  const auto good = gfp_pipeline(naive_decomp(4, make_context(3, 1)), 4, 3);
  {
    auto c = good;
    c.bound += 1;
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = good;
    c.t += 1;
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = good;
    c.blaser->vanishing.push_back(63);
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = good;
    c.inv->c = Mat::identity(c.ctx, 4);
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = good;
    c.commutator->agree += 1;
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = good;
    c.circuit->triples.pop_back();
    EXPECT_FALSE(check_certificate(c));
  }
  auto g2 = gf2_pipeline(code_from_bilinear(naive_decomp(3, F2)), 3);
  {
    auto c = g2;
    c.gf2->family[1] = c.gf2->family[0];
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = g2;
    c.gf2->plotkin += 1;
    EXPECT_FALSE(check_certificate(c));
  }
  {
    auto c = g2;
    c.m_actual = 3;
    EXPECT_FALSE(check_certificate(c));
  }
}

TEST(Certificate, BoundNeverExceedsGatesOnShippedShapes) {
  for (std::uint64_t p : {2, 3}) {
    const FieldCtx f = make_context(p, 1);
    const std::size_t k = std::max<std::size_t>(3, p + 1);
    for (std::size_t n = 2; n <= 4; ++n) {
      const auto cert = gf2_pipeline(code_from_bilinear(naive_decomp(n, f)), k);
      EXPECT_LE(cert.bound, static_cast<std::int64_t>(n * n * n));
      EXPECT_TRUE(check_certificate(cert));
    }
  }
}

TEST(Certificate, SeedReproducibility) {
  const auto code = code_from_bilinear(naive_decomp(3, make_context(3, 1)));
  const auto a = gf2_pipeline(code, 4, 7), b = gf2_pipeline(code, 4, 7);
  EXPECT_EQ(a.gf2->family, b.gf2->family);
  EXPECT_EQ(a.bound, b.bound);
}
