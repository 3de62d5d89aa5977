#include "col/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>

#include "col/error.hpp"

namespace col {

void FactSet::set(const std::string& feature, Value value, std::string context) {
  facts[feature] = Fact{std::move(value), std::move(context)};
  unknown.erase(feature);
}

void FactSet::mark_unknown(const std::string& feature) {
  facts.erase(feature);
  unknown.insert(feature);
}

const Value* FactSet::get(const std::string& feature) const {
  auto it = facts.find(feature);
  return it == facts.end() ? nullptr : &it->second.value;
}

std::map<std::string, Value> FactSet::values() const {
  std::map<std::string, Value> out;
  for (const auto& [f, fact] : facts) out.emplace(f, fact.value);
  return out;
}

Binding resolve_binding(const KnowledgeBase& kb, const std::string& feature, const Value& value) {
  const FeatureDef& def = kb.feature(feature);
  if (def.is_numeric()) {
    if (is_number(value)) return {def.name, value};
    const auto& text = std::get<std::string>(value);
    double x = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw Error(ErrorCode::UnknownValue, "feature " + def.name + " expects a number, got " + text);
    }
    return {def.name, x};
  }
  if (!is_label(value)) {
    throw Error(ErrorCode::UnknownValue, "feature " + def.name + " expects a label, got " + to_string(value));
  }
  auto label = def.find_value(std::get<std::string>(value));
  if (!label) {
    throw Error(ErrorCode::UnknownValue, std::get<std::string>(value) + " is not a value of " + def.name);
  }
  return {def.name, *label};
}

FactSet resolve_facts(const KnowledgeBase& kb, const FactSet& facts) {
  FactSet out;
  for (const auto& [feature, fact] : facts.facts) {
    Binding b = resolve_binding(kb, feature, fact.value);
    if (const Value* prior = out.get(b.feature); prior && !value_equal(*prior, b.value)) {
      throw Error(ErrorCode::Inconsistent, "two values given for " + b.feature);
    }
    out.set(b.feature, b.value, fact.context);
  }
  for (const auto& f : facts.unknown) {
    const std::string name = kb.feature(f).name;
    if (!out.has(name)) out.mark_unknown(name);
  }
  return out;
}

double eval_expression(const Expression& expr, const std::map<std::string, double>& bindings) {
  switch (expr.kind()) {
    case Expression::Kind::number:
    case Expression::Kind::constant: return expr.value();
    case Expression::Kind::variable: {
      auto it = bindings.find(expr.name());
      if (it == bindings.end()) throw Error(ErrorCode::Unbound, "variable " + expr.name() + " is not bound");
      return it->second;
    }
    case Expression::Kind::binary: break;
  }
  const double a = eval_expression(expr.lhs(), bindings);
  const double b = eval_expression(expr.rhs(), bindings);
  switch (expr.op()) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    default: break;
  }
  if (b == 0.0) throw Error(ErrorCode::GuardError, "division by zero in " + to_string(expr));
  return a / b;
}

namespace {

using Known = std::map<std::string, Value>;

struct Firing {
  std::size_t rule = 0;
  Direction direction = Direction::forward;
  std::vector<Binding> consumed;
  std::vector<Binding> produced;
};

enum class Strictness { strict, lenient };

// Outcome of matching a conjunction against known facts.
struct Match {
  bool mismatch = false;
  bool missing_external = false;
  bool missing_other = false;
  bool complete() const { return !mismatch && !missing_external && !missing_other; }
};

Match match(const Frame& fr, const std::vector<Binding>& clause, const Known& known) {
  Match m;
  for (const auto& b : clause) {
    auto it = known.find(b.feature);
    if (it == known.end()) {
      (fr.is_external(b.feature) ? m.missing_external : m.missing_other) = true;
    } else if (!value_equal(it->second, b.value)) {
      m.mismatch = true;
    }
  }
  return m;
}

std::optional<Firing> fire_quantitative(const Frame& fr, std::size_t index, const QuantitativeRule& q,
                                        const Known& known, Strictness strictness) {
  if (known.contains(q.target)) return std::nullopt;

  std::set<std::string> needed = q.formula.variables();
  for (const auto& g : q.guards) {
    if (const auto* given = std::get_if<GivenGuard>(&g)) {
      needed.insert(given->feature);
    } else {
      for (const auto& v : std::get<NonzeroGuard>(g).expr.variables()) needed.insert(v);
    }
  }
  bool missing_external = false;
  for (const auto& f : needed) {
    if (known.contains(f)) continue;
    if (!fr.is_external(f)) return std::nullopt;
    missing_external = true;
  }
  if (missing_external) {
    if (strictness == Strictness::lenient) return std::nullopt;
    throw Error(ErrorCode::MissingExternal, "frame " + fr.name + " needs its external input to compute " + q.target);
  }

  std::map<std::string, double> numbers;
  Firing firing{index, Direction::forward, {}, {}};
  for (const auto& f : needed) {
    const Value& v = known.at(f);
    if (!is_number(v)) {
      if (strictness == Strictness::lenient) return std::nullopt;
      throw Error(ErrorCode::UnknownValue, "feature " + f + " is not numeric");
    }
    numbers[f] = std::get<double>(v);
    firing.consumed.push_back({f, v});
  }
  for (const auto& g : q.guards) {
    const auto* nz = std::get_if<NonzeroGuard>(&g);
    if (!nz) continue;
    if (eval_expression(nz->expr, numbers) == 0.0) {
      if (strictness == Strictness::lenient) return std::nullopt;
      throw Error(ErrorCode::GuardError, "guard " + to_string(nz->expr) + " ≠ 0 fails in frame " + fr.name);
    }
  }
  double result = 0.0;
  try {
    result = eval_expression(q.formula, numbers);
  } catch (const Error&) {
    if (strictness == Strictness::lenient) return std::nullopt;
    throw;
  }
  firing.produced.push_back({q.target, result});
  return firing;
}

std::vector<Firing> fire_forward(const Frame& fr, const Known& known, Strictness strictness) {
  std::vector<Firing> out;
  for (std::size_t i = 0; i < fr.rules.size(); ++i) {
    const Rule& r = fr.rules[i];
    if (!r.is_categorical()) {
      if (auto f = fire_quantitative(fr, i, r.quantitative(), known, strictness)) out.push_back(std::move(*f));
      continue;
    }
    const auto& c = r.categorical();
    const Match m = match(fr, c.antecedent, known);
    if (m.complete()) {
      out.push_back({i, Direction::forward, c.antecedent, c.consequent});
    } else if (strictness == Strictness::strict && !m.mismatch && m.missing_external && !m.missing_other) {
      throw Error(ErrorCode::MissingExternal, "frame " + fr.name + " needs its external input for '" + to_string(r) + "'");
    }
  }
  return out;
}

std::vector<Firing> fire_backward(const Frame& fr, const Known& known, Strictness strictness) {
  std::vector<Firing> out;
  bool one_sided_match = false;
  for (std::size_t i = 0; i < fr.rules.size(); ++i) {
    const Rule& r = fr.rules[i];
    if (!r.is_categorical()) {
      one_sided_match = one_sided_match || known.contains(r.quantitative().target);
      continue;
    }
    const auto& c = r.categorical();
    if (!match(fr, c.consequent, known).complete()) continue;
    if (c.reciprocal) {
      out.push_back({i, Direction::backward, c.consequent, c.antecedent});
    } else {
      one_sided_match = true;
    }
  }
  if (out.empty() && one_sided_match && strictness == Strictness::strict) {
    throw Error(ErrorCode::NonInvertible, "frame " + fr.name + " has no reciprocal rule for these outputs");
  }
  return out;
}

FactSet merge(const Frame& fr, const std::vector<Firing>& firings, const FactSet& given) {
  FactSet out;
  for (const auto& f : firings) {
    for (const auto& b : f.produced) {
      const Value* prior = out.get(b.feature);
      if (!prior) prior = given.get(b.feature);
      if (prior && !value_equal(*prior, b.value)) {
        throw Error(ErrorCode::Inconsistent, "frame " + fr.name + " derives " + b.feature + "=" + to_string(b.value) +
                                                 " but " + to_string(*prior) + " is already bound");
      }
      out.set(b.feature, b.value, fr.target);
    }
  }
  return out;
}

Step to_step(const Frame& fr, const Firing& f) {
  return Step{fr.name, f.rule, f.direction, f.consumed, f.produced};
}

void append_unique(std::vector<Step>& into, const std::vector<Step>& steps) {
  for (const auto& s : steps) {
    if (std::find(into.begin(), into.end(), s) == into.end()) into.push_back(s);
  }
}

}  // namespace

FactSet eval_forward(const Frame& frame, const FactSet& facts) {
  return merge(frame, fire_forward(frame, facts.values(), Strictness::strict), facts);
}

FactSet eval_backward(const Frame& frame, const FactSet& facts) {
  FactSet out = merge(frame, fire_backward(frame, facts.values(), Strictness::strict), facts);
  for (auto& [f, fact] : out.facts) fact.context = frame.source;
  return out;
}

std::string_view to_string(AnswerStatus status) {
  switch (status) {
    case AnswerStatus::exact: return "exact";
    case AnswerStatus::approximate: return "approximate";
    case AnswerStatus::unknown: return "unknown";
  }
  return "unknown";
}

std::map<std::string, std::pair<Value, std::vector<Step>>> closure(const KnowledgeBase& kb, const FactSet& facts,
                                                                   std::size_t depth) {
  std::map<std::string, std::pair<Value, std::vector<Step>>> known;
  for (const auto& [f, fact] : facts.facts) known.emplace(f, std::pair{fact.value, std::vector<Step>{}});

  for (std::size_t layer = 0; layer < depth; ++layer) {
    Known current;
    for (const auto& [f, entry] : known) current.emplace(f, entry.first);

    struct Pending {
      Value value;
      std::vector<Step> steps;
    };
    std::map<std::string, Pending> fresh;
    const auto absorb = [&](const Frame& fr, const Firing& firing) {
      for (const auto& b : firing.produced) {
        if (auto it = known.find(b.feature); it != known.end()) {
          if (!value_equal(it->second.first, b.value)) {
            throw Error(ErrorCode::Inconsistent, "frame " + fr.name + " derives " + to_string(b) +
                                                     " against known " + to_string(it->second.first));
          }
          continue;
        }
        if (auto it = fresh.find(b.feature); it != fresh.end()) {
          if (!value_equal(it->second.value, b.value)) {
            throw Error(ErrorCode::Inconsistent, "two derivations disagree on " + b.feature);
          }
          continue;
        }
        std::vector<Step> steps;
        for (const auto& c : firing.consumed) append_unique(steps, known.at(c.feature).second);
        steps.push_back(to_step(fr, firing));
        fresh.emplace(b.feature, Pending{b.value, std::move(steps)});
      }
    };
    for (const auto& [name, fr] : kb.frames()) {
      for (const auto& f : fire_forward(fr, current, Strictness::lenient)) absorb(fr, f);
      for (const auto& f : fire_backward(fr, current, Strictness::lenient)) absorb(fr, f);
    }
    if (fresh.empty()) break;
    for (auto& [f, p] : fresh) known.emplace(f, std::pair{std::move(p.value), std::move(p.steps)});
  }
  return known;
}

namespace {

// Features from which `goal` can be reached through some rule.
std::set<std::string> relevant_features(const KnowledgeBase& kb, const std::string& goal) {
  std::map<std::string, std::set<std::string>> sources;  // feature -> features it can be derived from
  for (const auto& [name, fr] : kb.frames()) {
    for (const auto& r : fr.rules) {
      if (r.is_categorical()) {
        const auto& c = r.categorical();
        for (const auto& out : c.consequent) {
          for (const auto& in : c.antecedent) sources[out.feature].insert(in.feature);
        }
        if (c.reciprocal) {
          for (const auto& in : c.antecedent) {
            for (const auto& out : c.consequent) sources[in.feature].insert(out.feature);
          }
        }
      } else {
        const auto& q = r.quantitative();
        for (const auto& f : r.features()) {
          if (f != q.target) sources[q.target].insert(f);
        }
      }
    }
  }
  std::set<std::string> seen;
  std::deque<std::string> queue{goal};
  while (!queue.empty()) {
    const auto f = queue.front();
    queue.pop_front();
    for (const auto& s : sources[f]) {
      if (s != goal && seen.insert(s).second) queue.push_back(s);
    }
  }
  return seen;
}

}  // namespace

Answer query(const KnowledgeBase& kb, const FactSet& facts, const std::string& goal, const QueryOptions& options) {
  const FactSet resolved = resolve_facts(kb, facts);
  const FeatureDef& goal_def = kb.feature(goal);

  Answer answer;
  const auto known = closure(kb, resolved, options.depth);
  if (auto it = known.find(goal_def.name); it != known.end()) {
    answer.status = AnswerStatus::exact;
    answer.value = it->second.first;
    answer.derivations.push_back(Derivation{it->second.second, Binding{goal_def.name, it->second.first}});
    return answer;
  }

  for (const auto& f : relevant_features(kb, goal_def.name)) {
    if (!known.contains(f)) answer.missing.push_back(f);
  }
  std::vector<const FeatureDef*> enumerable;
  for (const auto& f : answer.missing) {
    const auto& def = kb.feature(f);
    if (!def.is_numeric() && !def.values.empty()) enumerable.push_back(&def);
  }

  std::vector<Value> candidates;
  const auto try_completion = [&](const FactSet& completed) {
    try {
      const auto k = closure(kb, completed, options.depth);
      if (auto it = k.find(goal_def.name); it != k.end()) {
        const Value& v = it->second.first;
        if (std::none_of(candidates.begin(), candidates.end(), [&](const Value& c) { return value_equal(c, v); })) {
          candidates.push_back(v);
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconsistent) throw;
    }
  };

  std::size_t product = 1;
  for (const auto* def : enumerable) {
    product = product > options.max_completions / def->values.size() ? options.max_completions + 1
                                                                      : product * def->values.size();
  }
  if (!enumerable.empty() && product <= options.max_completions) {
    std::vector<std::size_t> digits(enumerable.size(), 0);
    for (std::size_t n = 0; n < product; ++n) {
      FactSet completed = resolved;
      for (std::size_t i = 0; i < enumerable.size(); ++i) {
        completed.set(enumerable[i]->name, enumerable[i]->values[digits[i]]);
      }
      try_completion(completed);
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < enumerable[i]->values.size()) break;
        digits[i] = 0;
      }
    }
  } else {
    for (const auto* def : enumerable) {
      for (const auto& v : def->values) {
        FactSet completed = resolved;
        completed.set(def->name, v);
        try_completion(completed);
      }
    }
  }

  // Candidates follow the goal's domain order when it has one.
  if (!goal_def.is_numeric()) {
    std::sort(candidates.begin(), candidates.end(), [&](const Value& a, const Value& b) {
      return goal_def.value_index(std::get<std::string>(a)) < goal_def.value_index(std::get<std::string>(b));
    });
  }
  if (!candidates.empty() && !answer.missing.empty()) {
    answer.status = AnswerStatus::approximate;
    answer.candidates = std::move(candidates);
  }
  return answer;
}

std::vector<Derivation> explain_cause(const KnowledgeBase& kb, const Binding& observation, std::size_t depth) {
  const Binding observed = resolve_binding(kb, observation.feature, observation.value);
  const bool produced = std::any_of(kb.frames().begin(), kb.frames().end(),
                                    [&](const auto& entry) { return entry.second.is_output(observed.feature); });
  if (!produced) throw Error(ErrorCode::NoCause, "no frame outputs " + observed.feature);

  std::vector<Derivation> found;
  std::function<void(const Known&, const Binding&, std::vector<Step>&, std::set<std::string>&)> walk =
      [&](const Known& known, const Binding& from, std::vector<Step>& path, std::set<std::string>& visited) {
        if (path.size() >= depth) return;
        for (const auto& [name, fr] : kb.frames()) {
          if (!fr.is_output(from.feature)) continue;
          for (const auto& firing : fire_backward(fr, known, Strictness::lenient)) {
            const bool uses_from = std::any_of(firing.consumed.begin(), firing.consumed.end(),
                                               [&](const Binding& b) { return b.feature == from.feature; });
            const bool fresh = std::none_of(firing.produced.begin(), firing.produced.end(),
                                            [&](const Binding& b) { return visited.contains(b.feature); });
            if (!uses_from || !fresh) continue;
            path.push_back(to_step(fr, firing));
            Known next = known;
            for (const auto& b : firing.produced) {
              next.emplace(b.feature, b.value);
              visited.insert(b.feature);
            }
            for (const auto& b : firing.produced) found.push_back(Derivation{path, b});
            for (const auto& b : firing.produced) walk(next, b, path, visited);
            for (const auto& b : firing.produced) visited.erase(b.feature);
            path.pop_back();
          }
        }
      };

  std::vector<Step> path;
  std::set<std::string> visited{observed.feature};
  walk(Known{{observed.feature, observed.value}}, observed, path, visited);
  std::stable_sort(found.begin(), found.end(),
                   [](const Derivation& a, const Derivation& b) { return a.steps.size() < b.steps.size(); });
  return found;
}

bool replay(const KnowledgeBase& kb, const FactSet& initial, const Derivation& derivation) {
  Known known = resolve_facts(kb, initial).values();
  for (const auto& step : derivation.steps) {
    const Frame* fr = kb.find_frame(step.frame);
    if (!fr || step.rule >= fr->rules.size()) return false;
    for (const auto& b : step.consumed) {
      auto it = known.find(b.feature);
      if (it == known.end() || !value_equal(it->second, b.value)) return false;
    }
    Known local;
    for (const auto& b : step.consumed) local.emplace(b.feature, b.value);
    const auto firings = step.direction == Direction::forward ? fire_forward(*fr, local, Strictness::lenient)
                                                              : fire_backward(*fr, local, Strictness::lenient);
    auto it = std::find_if(firings.begin(), firings.end(), [&](const Firing& f) { return f.rule == step.rule; });
    if (it == firings.end() || it->produced.size() != step.produced.size()) return false;
    for (std::size_t i = 0; i < it->produced.size(); ++i) {
      if (it->produced[i].feature != step.produced[i].feature ||
          !value_equal(it->produced[i].value, step.produced[i].value)) {
        return false;
      }
      known.insert_or_assign(step.produced[i].feature, step.produced[i].value);
    }
  }
  auto it = known.find(derivation.conclusion.feature);
  return it != known.end() && value_equal(it->second, derivation.conclusion.value);
}

}  // namespace col
