#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "col/expression.hpp"
#include "col/knowledge_base.hpp"
#include "col/value.hpp"

namespace col {

struct Fact {
  Value value;
  std::string context;  // concept the fact was stated about, if any

  friend bool operator==(const Fact&, const Fact&) = default;
};

// At most one value per feature. Features listed in `unknown` were
// explicitly reported as not known.
struct FactSet {
  std::map<std::string, Fact> facts;
  std::set<std::string> unknown;

  void set(const std::string& feature, Value value, std::string context = {});
  void mark_unknown(const std::string& feature);
  const Value* get(const std::string& feature) const;
  bool has(const std::string& feature) const { return facts.contains(feature); }
  bool empty() const { return facts.empty(); }
  std::size_t size() const { return facts.size(); }
  std::map<std::string, Value> values() const;

  friend bool operator==(const FactSet&, const FactSet&) = default;
};

// Canonical feature names and domain labels; numeric text is parsed for
// numeric features. Throws UnknownReference / UnknownValue.
FactSet resolve_facts(const KnowledgeBase& kb, const FactSet& facts);
Binding resolve_binding(const KnowledgeBase& kb, const std::string& feature, const Value& value);

enum class Direction { forward, backward };

struct Step {
  std::string frame;
  std::size_t rule = 0;
  Direction direction = Direction::forward;
  std::vector<Binding> consumed;
  std::vector<Binding> produced;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Derivation {
  std::vector<Step> steps;
  Binding conclusion;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

// Evaluates the arithmetic tree. Unbound on a missing variable, GuardError
// on a zero divisor.
double eval_expression(const Expression& expr, const std::map<std::string, double>& bindings);

// Fires every rule whose antecedent (and activation guards) hold on the given
// facts and returns the merged outputs. Throws MissingExternal, GuardError,
// Inconsistent.
FactSet eval_forward(const Frame& frame, const FactSet& facts);
// Fires reciprocal rules from consequent to antecedent. Throws NonInvertible
// when only one-sided rules match the given outputs, Inconsistent on clashes.
FactSet eval_backward(const Frame& frame, const FactSet& facts);

enum class AnswerStatus { exact, approximate, unknown };
std::string_view to_string(AnswerStatus status);

struct Answer {
  AnswerStatus status = AnswerStatus::unknown;
  std::optional<Value> value;
  std::vector<Value> candidates;
  std::vector<Derivation> derivations;
  std::vector<std::string> missing;
};

inline constexpr std::size_t kDefaultDepthLimit = 8;

struct QueryOptions {
  std::size_t depth = kDefaultDepthLimit;
  // Upper bound on the number of completions tried for approximate answers.
  std::size_t max_completions = 4096;
};

// Breadth-first chaining over all frames, both directions. Throws
// Inconsistent when the facts lead to two values for one feature.
Answer query(const KnowledgeBase& kb, const FactSet& facts, const std::string& goal,
             const QueryOptions& options = {});

// Every value derivable from the facts within the depth limit, keyed by
// feature, with a shortest derivation each (given facts have no steps).
std::map<std::string, std::pair<Value, std::vector<Step>>> closure(const KnowledgeBase& kb,
                                                                   const FactSet& facts,
                                                                   std::size_t depth = kDefaultDepthLimit);

// All backward chains from an observed output to frame inputs, shortest
// first. Throws NoCause when no frame outputs the feature.
std::vector<Derivation> explain_cause(const KnowledgeBase& kb, const Binding& observation,
                                      std::size_t depth = kDefaultDepthLimit);

// Re-fires each step against the KB starting from `initial`; true iff every
// step reproduces its recorded bindings and the conclusion is reached.
bool replay(const KnowledgeBase& kb, const FactSet& initial, const Derivation& derivation);

}  // namespace col
