#include <gtest/gtest.h>

#include <cctype>
#include <set>

#include "mpbound/lemma_suite.hpp"

using namespace mpbound;

namespace {

SuiteConfig light() {
  SuiteConfig cfg;
  cfg.samples = 2000;
  cfg.embed_max_order = 256;
  return cfg;
}

}  // namespace

TEST(LemmaSuite, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& e : lemma_registry()) EXPECT_TRUE(names.insert(e.name).second) << e.name;
  EXPECT_EQ(names.size(), 14u);
  EXPECT_TRUE(names.count("embed") && names.count("intersect") && names.count("bla"));
}

class LemmaRunner : public ::testing::TestWithParam<std::size_t> {};

TEST_P(LemmaRunner, PassesAtReducedSize) {
  const auto& entry = lemma_registry().at(GetParam());
  const auto r = entry.run(light());
  EXPECT_EQ(r.name, entry.name);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_GT(r.instances, 0u);
}

INSTANTIATE_TEST_SUITE_P(All, LemmaRunner, ::testing::Range<std::size_t>(0, 14), [](const auto& info) {
  std::string name = lemma_registry().at(info.param).name;
  for (auto& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return name;
});

TEST(LemmaSuite, ReportsAreDeterministic) {
  for (const char* name : {"schwartz", "intersect", "k-commutator"})
    for (const auto& e : lemma_registry())
      if (e.name == name) {
        EXPECT_EQ(format_lemma_line(e.run(light())), format_lemma_line(e.run(light())));
      }
}

TEST(LemmaSuite, LineFormat) {
  EXPECT_EQ(format_lemma_line({"x", true, 3, ""}), "PASS x instances=3");
  EXPECT_EQ(format_lemma_line({"y", false, 0, "broken"}), "FAIL y instances=0 (broken)");
}
