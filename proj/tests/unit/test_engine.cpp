#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "col/engine.hpp"
#include "col/error.hpp"
#include "fixtures.hpp"

using col::AnswerStatus;
using col::Direction;
using col::ErrorCode;
using fixtures::facts;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const col::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

std::string label(const col::FactSet& fs, const std::string& f) { return std::get<std::string>(*fs.get(f)); }

}  // namespace

TEST_CASE("forward evaluation") {
  const auto& kb = fixtures::case_study();
  auto out = col::eval_forward(kb.frame("TO SEE"), facts({{"Owns glasses", std::string("Yes")}}));
  CHECK(label(out, "Quality vision") == "Good");
  out = col::eval_forward(kb.frame("TO LET FALL"), facts({{"Type of material", std::string("Synthetic")}}));
  CHECK(label(out, "Breakable") == "No");
  CHECK(col::eval_forward(kb.frame("TO SEE"), {}).empty());
}

TEST_CASE("backward evaluation") {
  const auto& kb = fixtures::case_study();
  auto in = col::eval_backward(kb.frame("TO USE"), facts({{"Pain at eyes", std::string("Yes")}}));
  CHECK(label(in, "Quality vision") == "Bad");
  in = col::eval_backward(kb.frame("TO SEE"), facts({{"Quality vision", std::string("Good")}}));
  CHECK(label(in, "Owns glasses") == "Yes");

  col::KnowledgeBase one_sided = fixtures::snapshot("stage4");
  one_sided.add_concept("Eyes");
  col::FeatureDef d;
  d.name = "Tired";
  d.values = {"Yes", "No"};
  one_sided.add_feature(d);
  one_sided.add_frame({"TO TIRE", "See well", "Eyes", {"Quality vision"}, {"Tired"}, {}});
  one_sided.add_rule("TO TIRE", col::Rule{col::CategoricalRule{{{"Quality vision", "Bad"}}, {{"Tired", "Yes"}}, false}});
  CHECK(code_of([&] { col::eval_backward(one_sided.frame("TO TIRE"), facts({{"Tired", std::string("Yes")}})); }) ==
        ErrorCode::NonInvertible);
}

TEST_CASE("gas-law frame") {
  const auto kb = fixtures::evaporation();
  const auto& frame = kb.frame("EVAPORATION");

  auto out = col::eval_forward(frame, facts({{"n", 1.0}, {"V", 0.0224}, {"T", 300.0}}));
  const double p_oracle = 1.0 * 8.314 * 300.0 / 0.0224;
  CHECK(std::get<double>(*out.get("P")) == doctest::Approx(p_oracle).epsilon(1e-12));

  out = col::eval_forward(frame, facts({{"n", 1.0}, {"P", 101325.0}, {"T", 300.0}}));
  CHECK(std::get<double>(*out.get("V")) == doctest::Approx(1.0 * 8.314 * 300.0 / 101325.0).epsilon(1e-12));

  out = col::eval_forward(frame, facts({{"P", 101325.0}, {"V", 0.0224}, {"T", 300.0}}));
  CHECK(std::get<double>(*out.get("n")) == doctest::Approx(101325.0 * 0.0224 / (8.314 * 300.0)).epsilon(1e-12));

  CHECK(code_of([&] { col::eval_forward(frame, facts({{"n", 1.0}, {"V", 0.0}, {"T", 300.0}})); }) ==
        ErrorCode::GuardError);
  CHECK(code_of([&] { col::eval_forward(frame, facts({{"n", 1.0}, {"V", 0.0224}})); }) ==
        ErrorCode::MissingExternal);
  CHECK(code_of([&] { col::eval_backward(frame, facts({{"P", 5.0}})); }) == ErrorCode::NonInvertible);

  // Through query, numbers given as text are parsed.
  const auto a = col::query(kb, facts({{"n", std::string("1")}, {"V", std::string("0.0224")}, {"T", 300.0}}), "P");
  REQUIRE(a.status == AnswerStatus::exact);
  CHECK(std::get<double>(*a.value) == doctest::Approx(p_oracle).epsilon(1e-12));
}

TEST_CASE("queries on the case study") {
  const auto& kb = fixtures::case_study();
  auto a = col::query(kb, facts({{"Pain at eyes", std::string("Yes")}}), "Quality vision");
  REQUIRE(a.status == AnswerStatus::exact);
  CHECK(std::get<std::string>(*a.value) == "Bad");
  REQUIRE(a.derivations.size() == 1);
  REQUIRE(a.derivations[0].steps.size() == 1);
  CHECK(a.derivations[0].steps[0].frame == "TO USE");
  CHECK(a.derivations[0].steps[0].direction == Direction::backward);

  // The TO SEE and TO USE tables chain Pain=Yes -> Quality=Bad -> Owns=No.
  a = col::query(kb, facts({{"PainAtEyes", std::string("yes")}}), "OwnsGlasses");
  REQUIRE(a.status == AnswerStatus::exact);
  CHECK(std::get<std::string>(*a.value) == "No");
  REQUIRE(a.derivations[0].steps.size() == 2);
  CHECK(a.derivations[0].steps[0].frame == "TO USE");
  CHECK(a.derivations[0].steps[1].frame == "TO SEE");
  CHECK(col::replay(kb, facts({{"Pain at eyes", std::string("Yes")}}), a.derivations[0]));

  // Asking what gives good vision.
  a = col::query(kb, facts({{"Quality vision", std::string("Good")}}), "Owns glasses");
  REQUIRE(a.status == AnswerStatus::exact);
  CHECK(std::get<std::string>(*a.value) == "Yes");

  a = col::query(kb, {}, "Quality vision");
  REQUIRE(a.status == AnswerStatus::approximate);
  CHECK(a.candidates == std::vector<col::Value>{std::string("Good"), std::string("Bad")});
  CHECK(std::set<std::string>(a.missing.begin(), a.missing.end()) ==
        std::set<std::string>{"Owns glasses", "Pain at eyes"});

  // Known goal needs no steps.
  a = col::query(kb, facts({{"Breakable", std::string("Yes")}}), "Breakable");
  CHECK(a.status == AnswerStatus::exact);
  CHECK(a.derivations[0].steps.empty());

  CHECK(code_of([&] {
          col::query(kb, facts({{"Pain at eyes", std::string("Yes")}, {"Owns glasses", std::string("Yes")}}),
                     "Breakable");
        }) == ErrorCode::Inconsistent);
  CHECK(code_of([&] { col::query(kb, {}, "Colour"); }) == ErrorCode::UnknownReference);
}

TEST_CASE("unknown when nothing leads to the goal") {
  col::KnowledgeBase kb = fixtures::case_study();
  col::FeatureDef d;
  d.name = "Colour";
  d.values = {"Red"};
  kb.add_feature(d);
  const auto a = col::query(kb, {}, "Colour");
  CHECK(a.status == AnswerStatus::unknown);
  CHECK(a.candidates.empty());
}

TEST_CASE("explaining causes") {
  const auto& kb = fixtures::case_study();
  auto chains = col::explain_cause(kb, {"Breakable", std::string("Yes")});
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].steps.size() == 1);
  CHECK(chains[0].conclusion == col::Binding{"Type of material", std::string("Mineral")});

  chains = col::explain_cause(kb, {"Pain at eyes", std::string("Yes")});
  REQUIRE(chains.size() == 2);
  CHECK(chains[0].steps.size() == 1);
  CHECK(chains[0].conclusion == col::Binding{"Quality vision", std::string("Bad")});
  CHECK(chains[1].steps.size() == 2);
  CHECK(chains[1].conclusion == col::Binding{"Owns glasses", std::string("No")});
  for (const auto& d : chains) CHECK(col::replay(kb, facts({{"Pain at eyes", std::string("Yes")}}), d));

  CHECK(code_of([&] { col::explain_cause(kb, {"Owns glasses", std::string("Yes")}); }) == ErrorCode::NoCause);
}

TEST_CASE("tampered derivations do not replay") {
  const auto& kb = fixtures::case_study();
  const auto given = facts({{"Pain at eyes", std::string("Yes")}});
  auto d = col::query(kb, given, "Owns glasses").derivations.at(0);
  d.steps[1].produced[0].value = std::string("Yes");
  CHECK_FALSE(col::replay(kb, given, d));
}

TEST_CASE("forward evaluation is monotone") {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    auto rf = fixtures::random_reciprocal_frame(rng);
    const auto& frame = rf.kb.frame(rf.frame);
    col::FactSet small, large;
    for (const auto& f : rf.inputs) {
      const auto& values = rf.kb.feature(f).values;
      const auto v = values[rng() % values.size()];
      large.set(f, v);
      if (rng() % 2) small.set(f, v);
    }
    const auto a = col::eval_forward(frame, small);
    const auto b = col::eval_forward(frame, large);
    for (const auto& [f, fact] : a.facts) {
      REQUIRE(b.get(f) != nullptr);
      CHECK(col::value_equal(*b.get(f), fact.value));
    }
  }
}

// Brute-force chaining oracle: fire any applicable rule in any order until
// nothing new appears; record every value each feature can take.
namespace {

using State = std::map<std::string, std::set<std::string>>;

bool holds(const State& s, const std::vector<col::Binding>& clause) {
  for (const auto& b : clause) {
    auto it = s.find(b.feature);
    if (it == s.end() || !it->second.contains(std::get<std::string>(b.value))) return false;
  }
  return true;
}

State saturate(const col::KnowledgeBase& kb, State s) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [name, frame] : kb.frames()) {
      for (const auto& rule : frame.rules) {
        const auto& c = rule.categorical();
        auto add = [&](const std::vector<col::Binding>& clause) {
          for (const auto& b : clause) changed |= s[b.feature].insert(std::get<std::string>(b.value)).second;
        };
        if (holds(s, c.antecedent)) add(c.consequent);
        if (c.reciprocal && holds(s, c.consequent)) add(c.antecedent);
      }
    }
  }
  return s;
}

bool conflicted(const State& s) {
  return std::any_of(s.begin(), s.end(), [](const auto& kv) { return kv.second.size() > 1; });
}

std::set<std::string> oracle_relevant(const col::KnowledgeBase& kb, const std::string& goal) {
  std::set<std::string> seen{goal};
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [name, frame] : kb.frames()) {
      for (const auto& rule : frame.rules) {
        const auto& c = rule.categorical();
        auto touches = [&](const std::vector<col::Binding>& clause) {
          return std::any_of(clause.begin(), clause.end(), [&](const auto& b) { return seen.contains(b.feature); });
        };
        auto take = [&](const std::vector<col::Binding>& clause) {
          for (const auto& b : clause) changed |= seen.insert(b.feature).second;
        };
        if (touches(c.consequent)) take(c.antecedent);
        if (c.reciprocal && touches(c.antecedent)) take(c.consequent);
      }
    }
  }
  seen.erase(goal);
  return seen;
}

col::KnowledgeBase random_network(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  col::KnowledgeBase kb;
  kb.add_concept("A");
  kb.add_concept("B");
  const int nf = pick(3, 6);
  for (int i = 0; i < nf; ++i) {
    col::FeatureDef d;
    d.name = "f" + std::to_string(i);
    for (int v = 0, n = pick(2, 3); v < n; ++v) d.values.push_back("v" + std::to_string(v));
    kb.add_feature(d);
  }
  const int frames = pick(1, 4);
  for (int k = 0; k < frames; ++k) {
    std::vector<int> idx(nf);
    for (int i = 0; i < nf; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    const int ni = pick(1, std::min(2, nf - 1));
    const int no = pick(1, std::min(2, nf - ni));
    col::FrameSpec spec{"F" + std::to_string(k), "A", "B", {}, {}, {}};
    for (int i = 0; i < ni; ++i) spec.inputs.push_back("f" + std::to_string(idx[i]));
    for (int i = 0; i < no; ++i) spec.outputs.push_back("f" + std::to_string(idx[ni + i]));
    kb.add_frame(spec);
    for (int r = 0, nr = pick(1, 4); r < nr; ++r) {
      col::CategoricalRule rule;
      rule.reciprocal = rng() % 3 != 0;
      for (const auto& f : spec.inputs) {
        if (rule.antecedent.empty() || rng() % 2) rule.antecedent.push_back({f, "v" + std::to_string(rng() % 2)});
      }
      for (const auto& f : spec.outputs) {
        if (rule.consequent.empty() || rng() % 2) rule.consequent.push_back({f, "v" + std::to_string(rng() % 2)});
      }
      try {
        kb.add_rule(spec.name, col::Rule{rule});
      } catch (const col::Error&) {
      }
    }
  }
  return kb;
}

}  // namespace

TEST_CASE("query agrees with a brute-force chaining oracle") {
  std::mt19937 rng(424242);
  int exact = 0, approximate = 0, inconsistent = 0;
  for (int round = 0; round < 1500; ++round) {
    const auto kb = random_network(rng);
    const int nf = static_cast<int>(kb.feature_count());
    col::FactSet given;
    State start;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 2); i < n; ++i) {
      const std::string f = "f" + std::to_string(rng() % nf);
      const std::string v = "v" + std::to_string(rng() % 2);
      if (given.has(f)) continue;
      given.set(f, v);
      start[f].insert(v);
    }
    const std::string goal = "f" + std::to_string(rng() % nf);
    const State fixpoint = saturate(kb, start);
    INFO("round " << round);

    if (conflicted(fixpoint)) {
      CHECK(code_of([&] { col::query(kb, given, goal, {32, 4096}); }) == ErrorCode::Inconsistent);
      ++inconsistent;
      continue;
    }
    const auto answer = col::query(kb, given, goal, {32, 4096});
    auto it = fixpoint.find(goal);
    if (it != fixpoint.end()) {
      REQUIRE(answer.status == AnswerStatus::exact);
      CHECK(std::get<std::string>(*answer.value) == *it->second.begin());
      CHECK(col::replay(kb, given, answer.derivations.at(0)));
      ++exact;
      continue;
    }
    CHECK(answer.status != AnswerStatus::exact);

    // Candidates: goal values over every consistent completion of the
    // relevant features that are still unknown.
    std::vector<std::string> missing;
    for (const auto& f : oracle_relevant(kb, goal)) {
      if (!fixpoint.contains(f)) missing.push_back(f);
    }
    CHECK(std::set<std::string>(answer.missing.begin(), answer.missing.end()) ==
          std::set<std::string>(missing.begin(), missing.end()));
    std::set<std::string> candidates;
    std::vector<std::size_t> digits(missing.size(), 0);
    for (bool more = true; more;) {
      State s = start;
      for (std::size_t i = 0; i < missing.size(); ++i) {
        s[missing[i]].insert(kb.feature(missing[i]).values[digits[i]]);
      }
      const State sat = saturate(kb, s);
      if (!conflicted(sat) && sat.contains(goal)) candidates.insert(*sat.at(goal).begin());
      more = false;
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < kb.feature(missing[i]).values.size()) {
          more = true;
          break;
        }
        digits[i] = 0;
      }
    }
    std::set<std::string> got;
    for (const auto& v : answer.candidates) got.insert(std::get<std::string>(v));
    CHECK(got == candidates);
    CHECK((answer.status == AnswerStatus::approximate) == (!candidates.empty() && !missing.empty()));
    approximate += answer.status == AnswerStatus::approximate;
  }
  MESSAGE("exact " << exact << ", approximate " << approximate << ", inconsistent " << inconsistent);
  CHECK(exact > 100);
  CHECK(approximate > 100);
}

TEST_CASE("reciprocal frames invert") {
  std::mt19937 rng(99);
  for (int round = 0; round < 300; ++round) {
    auto rf = fixtures::random_reciprocal_frame(rng);
    const auto& frame = rf.kb.frame(rf.frame);
    CHECK(rf.kb.validate().empty());
    for (const auto& rule : frame.rules) {
      col::FactSet x;
      for (const auto& b : rule.categorical().antecedent) x.set(b.feature, b.value);
      const auto y = col::eval_forward(frame, x);
      const auto back = col::eval_backward(frame, y);
      for (const auto& [f, fact] : x.facts) {
        REQUIRE(back.get(f));
        CHECK(col::value_equal(*back.get(f), fact.value));
      }
    }
  }
}
