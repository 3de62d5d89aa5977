#include <doctest.h>

#include "col/error.hpp"
#include "col/learning.hpp"
#include "fixtures.hpp"

namespace {

col::KnowledgeBase fruit() {
  col::KnowledgeBase kb;
  kb.add_concept("Fruit");
  kb.add_class("Fruit", "Apple");
  kb.add_class("Fruit", "Lemon");
  col::FeatureDef sweet;
  sweet.name = "Sweetness";
  sweet.kind = col::FeatureKind::ordinal;
  sweet.values = {"Low", "Medium", "High"};
  kb.add_feature(sweet, "Fruit");
  col::FeatureDef colour;
  colour.name = "Colour";
  colour.values = {"Red", "Yellow"};
  kb.add_feature(colour, "Fruit");
  for (int i = 0; i < 4; ++i) {
    kb.observe("Sweetness", std::string(i < 3 ? "High" : "Medium"), std::string_view("Apple"));
    kb.observe("Colour", std::string(i < 3 ? "Red" : "Yellow"), std::string_view("Apple"));
    kb.observe("Sweetness", std::string(i < 3 ? "Low" : "Medium"), std::string_view("Lemon"));
    kb.observe("Colour", std::string("Yellow"), std::string_view("Lemon"));
  }
  return kb;
}

}  // namespace

TEST_CASE("observations raise class support") {
  const auto kb = fruit();
  CHECK(kb.concept_named("Fruit").classes.at("Apple").support == 8);
  const auto& c = kb.classifier_for("Colour");
  CHECK(c.class_histograms().at("Lemon") == col::Histogram{0, 4});
}

TEST_CASE("classify through the knowledge base") {
  const auto kb = fruit();
  // Apple: (3+1)/(4+3); Lemon: (0+1)/(4+3); equal priors.
  const auto p = col::classify(kb, "Sweetness", std::string("High"));
  CHECK(p.at("Apple") == doctest::Approx(4.0 / 5.0));
  CHECK(p.at("Lemon") == doctest::Approx(1.0 / 5.0));
}

TEST_CASE("classify_instance combines bound features and ignores unbound ones") {
  const auto kb = fruit();
  const auto sweet_only = col::classify_instance(kb, "Fruit", fixtures::facts({{"Sweetness", std::string("High")}}));
  CHECK(sweet_only.at("Apple") == doctest::Approx(col::classify(kb, "Sweetness", std::string("High")).at("Apple")));

  const auto both = col::classify_instance(
      kb, "Fruit", fixtures::facts({{"Sweetness", std::string("High")}, {"Colour", std::string("Red")}}));
  const auto s = col::classify(kb, "Sweetness", std::string("High"));
  const auto c = col::classify(kb, "Colour", std::string("Red"));
  const double a = s.at("Apple") * c.at("Apple"), l = s.at("Lemon") * c.at("Lemon");
  CHECK(both.at("Apple") == doctest::Approx(a / (a + l)).epsilon(1e-12));

  try {
    col::classify_instance(kb, "Fruit", {});
    FAIL("expected NoEvidence");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::NoEvidence);
  }
}

TEST_CASE("proposals become classes") {
  auto kb = fruit();
  col::ClassProposal p{"Apple", 0.4, "Pear"};
  CHECK(col::apply_proposal(kb, "Fruit", p) == "Pear");
  CHECK(kb.concept_named("Fruit").classes.contains("Pear"));
  CHECK(kb.classifier_for("Colour").class_histograms().contains("Pear"));
  CHECK(kb.validate().empty());
}

TEST_CASE("low-support suppression") {
  auto kb = fruit();
  kb.add_class("Fruit", "Pear");
  CHECK(col::suppress_low_support(kb, "Fruit", 0).empty());
  const auto before = col::classify(kb, "Colour", std::string("Red"));
  const auto removed = col::suppress_low_support(kb, "Fruit", 1);
  CHECK(removed == std::vector<std::string>{"Pear"});
  CHECK(kb.concept_named("Fruit").classes.size() == 2);
  CHECK_FALSE(kb.classifier_for("Colour").class_histograms().contains("Pear"));
  // Pear had no observations, so the remaining posteriors are unchanged and
  // still sum to one.
  const auto after = col::classify(kb, "Colour", std::string("Red"));
  CHECK(after.at("Apple") == doctest::Approx(before.at("Apple")));
  CHECK(after.at("Apple") + after.at("Lemon") == doctest::Approx(1.0));
  CHECK(kb.validate().empty());
}

TEST_CASE("ordinal comparison") {
  const auto kb = fruit();
  const auto high = fixtures::facts({{"Sweetness", std::string("High")}});
  const auto medium = fixtures::facts({{"Sweetness", std::string("medium")}});
  CHECK(col::compare_ordinal(kb, high, medium, "Sweetness") == std::strong_ordering::greater);
  CHECK(col::compare_ordinal(kb, medium, high, "Sweetness") == std::strong_ordering::less);
  CHECK(col::compare_ordinal(kb, high, high, "Sweetness") == std::strong_ordering::equal);
  try {
    col::compare_ordinal(kb, high, medium, "Colour");
    FAIL("expected NotOrdinal");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::NotOrdinal);
  }
  try {
    col::compare_ordinal(kb, high, {}, "Sweetness");
    FAIL("expected Unbound");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::Unbound);
  }
  const auto& cs = fixtures::case_study();
  try {
    col::compare_ordinal(cs, fixtures::facts({{"Breakable", std::string("Yes")}}),
                         fixtures::facts({{"Breakable", std::string("No")}}), "Breakable");
    FAIL("expected NotOrdinal");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::NotOrdinal);
  }
}

TEST_CASE("numeric features bin by equal width") {
  col::KnowledgeBase kb;
  kb.add_concept("Gas");
  kb.add_class("Gas", "Hot");
  col::FeatureDef t;
  t.name = "T";
  t.kind = col::FeatureKind::numeric;
  t.min = 0;
  t.max = 400;
  t.bins = 4;
  kb.add_feature(t, "Gas");
  kb.observe("T", 350.0, std::string_view("Hot"));
  kb.observe("T", 400.0, std::string_view("Hot"));
  CHECK(kb.classifier_for("T").class_histograms().at("Hot") == col::Histogram{0, 0, 0, 2});
  CHECK_THROWS_AS(kb.observe("T", 401.0, std::string_view("Hot")), col::Error);
}
