#include "codec.hpp"

#include "col/dsl.hpp"

namespace col::codec {

Reader Reader::at(const char* key) const {
  if (!j_->is_object()) fail("expected an object");
  auto it = j_->find(key);
  if (it == j_->end()) Reader(*j_, path_ + "/" + key, code_).fail("missing");
  return Reader(*it, path_ + "/" + key, code_);
}

Reader Reader::at(std::size_t index) const {
  if (!j_->is_array()) fail("expected an array");
  if (index >= j_->size()) fail("index " + std::to_string(index) + " out of range");
  return Reader((*j_)[index], path_ + "/" + std::to_string(index), code_);
}

std::size_t Reader::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

std::vector<std::string> Reader::keys() const {
  if (!j_->is_object()) fail("expected an object");
  std::vector<std::string> out;
  for (const auto& [k, v] : j_->items()) out.push_back(k);
  return out;
}

std::string Reader::str() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

double Reader::num() const {
  if (!j_->is_number()) fail("expected a number");
  return j_->get<double>();
}

std::uint64_t Reader::u64() const {
  if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<std::int64_t>() >= 0)) {
    fail("expected a non-negative integer");
  }
  return j_->get<std::uint64_t>();
}

bool Reader::boolean() const {
  if (!j_->is_boolean()) fail("expected true or false");
  return j_->get<bool>();
}

std::vector<std::string> Reader::strings() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
  return out;
}

Value Reader::value() const {
  if (j_->is_string()) return j_->get<std::string>();
  if (j_->is_number()) return j_->get<double>();
  fail("expected a label or a number");
}

void Reader::fail(const std::string& what) const {
  throw Error(code_, (path_.empty() ? "/" : path_) + ": " + what);
}

json to_json(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<double>(v);
}

json to_json(const Binding& b) { return {{"feature", b.feature}, {"value", to_json(b.value)}}; }

namespace {

json bindings(const std::vector<Binding>& list) {
  json out = json::array();
  for (const auto& b : list) out.push_back(to_json(b));
  return out;
}

std::vector<Binding> bindings_from(const Reader& r) {
  std::vector<Binding> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Reader b = r.at(i);
    out.push_back({b.at("feature").str(), b.at("value").value()});
  }
  return out;
}

Expression expression_from(const Reader& r) {
  try {
    return parse_expression(r.str());
  } catch (const Error& e) {
    r.fail(e.detail());
  }
}

}  // namespace

json to_json(const Rule& rule) {
  if (rule.is_categorical()) {
    const auto& c = rule.categorical();
    return {{"kind", "categorical"},
            {"if", bindings(c.antecedent)},
            {"then", bindings(c.consequent)},
            {"reciprocal", c.reciprocal}};
  }
  const auto& q = rule.quantitative();
  json guards = json::array();
  for (const auto& g : q.guards) {
    if (const auto* given = std::get_if<GivenGuard>(&g)) {
      guards.push_back({{"given", given->feature}});
    } else {
      guards.push_back({{"nonzero", to_string(std::get<NonzeroGuard>(g).expr)}});
    }
  }
  return {{"kind", "formula"}, {"guards", guards}, {"target", q.target}, {"formula", to_string(q.formula)}};
}

Rule rule_from_json(const Reader& r) {
  const std::string kind = r.at("kind").str();
  if (kind == "categorical") {
    CategoricalRule c;
    c.antecedent = bindings_from(r.at("if"));
    c.consequent = bindings_from(r.at("then"));
    c.reciprocal = r.at("reciprocal").boolean();
    return Rule{c};
  }
  if (kind != "formula") r.at("kind").fail("expected \"categorical\" or \"formula\"");
  std::vector<Guard> list;
  const Reader guards = r.at("guards");
  for (std::size_t i = 0; i < guards.size(); ++i) {
    const Reader g = guards.at(i);
    if (g.has("given")) {
      list.emplace_back(GivenGuard{g.at("given").str()});
    } else if (g.has("nonzero")) {
      list.emplace_back(NonzeroGuard{expression_from(g.at("nonzero"))});
    } else {
      g.fail("expected a \"given\" or \"nonzero\" guard");
    }
  }
  return Rule{QuantitativeRule{std::move(list), r.at("target").str(), expression_from(r.at("formula"))}};
}

json to_json(const Step& s) {
  return {{"frame", s.frame},
          {"rule", s.rule},
          {"direction", s.direction == Direction::forward ? "forward" : "backward"},
          {"consumed", bindings(s.consumed)},
          {"produced", bindings(s.produced)}};
}

json to_json(const Derivation& d) {
  json steps = json::array();
  for (const auto& s : d.steps) steps.push_back(to_json(s));
  return {{"steps", steps}, {"conclusion", to_json(d.conclusion)}};
}

json to_json(const Answer& a) {
  json out{{"status", std::string(to_string(a.status))}};
  out["value"] = a.value ? to_json(*a.value) : json(nullptr);
  json candidates = json::array();
  for (const auto& v : a.candidates) candidates.push_back(to_json(v));
  out["candidates"] = candidates;
  // Compact path of the first derivation: "TO USE↩" for a backward firing.
  json path = json::array();
  if (!a.derivations.empty()) {
    for (const auto& s : a.derivations.front().steps) {
      path.push_back(s.frame + (s.direction == Direction::backward ? "↩" : "→"));
    }
  }
  out["derivation"] = path;
  json all = json::array();
  for (const auto& d : a.derivations) all.push_back(to_json(d));
  out["derivations"] = all;
  out["missing"] = a.missing;
  return out;
}

json to_json(const KbDelta& d) {
  return {{"added_concepts", d.added_concepts}, {"removed_concepts", d.removed_concepts},
          {"added_classes", d.added_classes},   {"removed_classes", d.removed_classes},
          {"added_features", d.added_features}, {"removed_features", d.removed_features},
          {"added_frames", d.added_frames},     {"removed_frames", d.removed_frames},
          {"added_rules", d.added_rules},       {"removed_rules", d.removed_rules}};
}

json frame_table(const Frame& frame) {
  json rules = json::array();
  for (const auto& r : frame.rules) rules.push_back(to_string(r));
  return {{"name", frame.name},     {"source", frame.source},       {"target", frame.target},
          {"input", frame.inputs},  {"external", frame.externals},  {"output", frame.outputs},
          {"rules", rules}};
}

}  // namespace col::codec
