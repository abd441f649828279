#include <gtest/gtest.h>

#include "mpbound/circuits.hpp"
#include "mpbound/families.hpp"

using namespace mpbound;

namespace {

std::vector<LinForm> coordinates(FieldCtx f, std::size_t n) {
  std::vector<LinForm> out;
  for (std::size_t i = 0; i < n * n; ++i) out.push_back(LinForm::coordinate(f, n * n, i));
  return out;
}

std::vector<LinForm> u_forms(const BilinearDecomp& d) {
  std::vector<LinForm> out;
  for (const auto& t : d.triples) out.push_back(t.u);
  return out;
}

void expect_pairwise_invertible(const std::vector<Mat>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) EXPECT_TRUE(is_invertible(a[i] - a[j])) << i << "," << j;
}

void expect_commutators_invertible(const std::vector<Mat>& a) {
  for (std::size_t l = 0; l < a.size(); ++l)
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < j; ++i) EXPECT_TRUE(is_invertible(commutator(a[i] - a[l], a[j] - a[l])));
}

}  // namespace

TEST(Families, Choose) {
  EXPECT_EQ(choose(5, 2), 10u);
  EXPECT_EQ(choose(3, 3), 1u);
  EXPECT_EQ(choose(2, 3), 0u);
  EXPECT_EQ(choose(40, 20), 137846528820u);
}

TEST(Families, InvertibleDifferenceExamples) {
  const FieldCtx f2 = make_context(2, 1);
  const auto two = invertible_difference_family(2, 2, f2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_TRUE(two[0].is_zero());
  EXPECT_EQ(two[1], Mat::identity(f2, 2));
  const auto four = invertible_difference_family(2, 4, f2);
  ASSERT_EQ(four.size(), 4u);
  expect_pairwise_invertible(four);
  EXPECT_EQ(invertible_difference_family(3, 1, f2).size(), 1u);
  EXPECT_THROW(invertible_difference_family(2, 5, f2), PreconditionError);
  EXPECT_THROW(invertible_difference_family(2, 2, make_context(2, 2)), PreconditionError);
}

TEST(Families, VanishSmallestCase) {
  const FieldCtx f2 = make_context(2, 1);
  const auto forms = coordinates(f2, 2);
  const auto w = vanish_family(forms, 2, 2, f2);
  ASSERT_EQ(w.mats.size(), 2u);
  expect_pairwise_invertible(w.mats);
  EXPECT_EQ(w.vanishing.size(), 2u);
  EXPECT_TRUE(w.mats[0].is_zero());
  EXPECT_EQ(w.mats[1], Mat::identity(f2, 2));
}

struct VanishCase {
  std::uint64_t p;
  std::size_t n, k;
};

class VanishFamily : public ::testing::TestWithParam<VanishCase> {};

TEST_P(VanishFamily, MeetsVanishingCount) {
  const auto [p, n, k] = GetParam();
  const FieldCtx f = make_context(p, 1);
  for (const auto& forms : {coordinates(f, n), u_forms(naive_decomp(n, f))}) {
    const auto w = vanish_family(forms, n, k, f);
    ASSERT_EQ(w.mats.size(), k);
    expect_pairwise_invertible(w.mats);
    const std::size_t d = choose(k, 2) * n;
    std::size_t indep_vanishing = 0;
    for (auto i : w.vanishing) indep_vanishing += std::binary_search(w.basis.begin(), w.basis.end(), i);
    if (d < n * n) {
      EXPECT_GE(indep_vanishing, n * n - d);
    }
    for (auto i : w.vanishing)
      for (const auto& a : w.mats) EXPECT_TRUE(eval_form(forms[i], a).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, VanishFamily,
                         ::testing::Values(VanishCase{2, 2, 2}, VanishCase{2, 3, 2}, VanishCase{2, 4, 2},
                                           VanishCase{2, 2, 3}, VanishCase{3, 2, 2}, VanishCase{3, 3, 2},
                                           VanishCase{3, 4, 2}, VanishCase{3, 2, 3}, VanishCase{2, 2, 4},
                                           VanishCase{5, 3, 3}));

TEST(Families, VanishNeedsSpanningForms) {
  const FieldCtx f = make_context(2, 1);
  const std::vector<LinForm> forms(4, LinForm::coordinate(f, 4, 0));
  EXPECT_THROW(vanish_family(forms, 2, 2, f), PreconditionError);
}

TEST(Families, CommutatorFamilies) {
  for (auto [p, n] : {std::pair{3u, 4u}, std::pair{2u, 6u}}) {
    const FieldCtx f = make_context(p, 1);
    const auto forms = coordinates(f, n);
    const auto w = commutator_family(n, 3, forms, f);
    ASSERT_EQ(w.mats.size(), 3u);
    expect_commutators_invertible(w.mats);
    EXPECT_GE(w.vanishing.size(), n * n - 2 * n);
  }
}

TEST(Families, CommutatorPreconditions) {
  const FieldCtx f3 = make_context(3, 1);
  EXPECT_THROW(commutator_family(3, 3, coordinates(f3, 3), f3), PreconditionError);
  const FieldCtx f2 = make_context(2, 1);
  EXPECT_THROW(commutator_family(4, 3, coordinates(f2, 4), f2), PreconditionError);
}

TEST(Families, CommutatorVacuousBelowThree) {
  const FieldCtx f = make_context(3, 1);
  const auto w = commutator_family(4, 2, coordinates(f, 4), f);
  EXPECT_EQ(w.mats.size(), 2u);
  EXPECT_EQ(w.vanishing.size(), 16u);
}

TEST(Families, Deterministic) {
  const FieldCtx f = make_context(3, 1);
  const auto forms = coordinates(f, 4);
  const auto a = commutator_family(4, 3, forms, f), b = commutator_family(4, 3, forms, f);
  EXPECT_EQ(a.mats, b.mats);
  EXPECT_EQ(a.vanishing, b.vanishing);
}
