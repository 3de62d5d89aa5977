#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "col/expression.hpp"
#include "col/value.hpp"

namespace col {

// Categorical implication between conjunctions of feature=value bindings.
// Reciprocal rules read as biconditionals and may be used backward.
struct CategoricalRule {
  std::vector<Binding> antecedent;  // over inputs and externals
  std::vector<Binding> consequent;  // over outputs
  bool reciprocal = true;

  friend bool operator==(const CategoricalRule&, const CategoricalRule&) = default;
};

// Activation condition: the feature must be given.
struct GivenGuard {
  std::string feature;
  friend bool operator==(const GivenGuard&, const GivenGuard&) = default;
};

// Evaluation condition: the expression must not be zero. A rule whose
// activation conditions hold but whose nonzero guard fails is a GuardError.
struct NonzeroGuard {
  Expression expr;
  friend bool operator==(const NonzeroGuard&, const NonzeroGuard&) = default;
};

using Guard = std::variant<GivenGuard, NonzeroGuard>;

// One-sided formula `target = formula`, forward only.
struct QuantitativeRule {
  std::vector<Guard> guards;
  std::string target;
  Expression formula;

  friend bool operator==(const QuantitativeRule&, const QuantitativeRule&) = default;
};

struct Rule {
  std::variant<CategoricalRule, QuantitativeRule> body;

  bool is_categorical() const { return std::holds_alternative<CategoricalRule>(body); }
  bool is_reciprocal() const {
    const auto* c = std::get_if<CategoricalRule>(&body);
    return c && c->reciprocal;
  }
  const CategoricalRule& categorical() const { return std::get<CategoricalRule>(body); }
  const QuantitativeRule& quantitative() const { return std::get<QuantitativeRule>(body); }

  // Every feature the rule mentions.
  std::set<std::string> features() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Table rendering, e.g. "If Owns glasses=Yes ⇔ Quality vision=Good" or
// "If n, V given and V ≠ 0 then P = n * R * T / V".
std::string to_string(const Rule& rule);

}  // namespace col
