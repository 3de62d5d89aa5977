#include "col/rule.hpp"

namespace col {

std::set<std::string> Rule::features() const {
  std::set<std::string> out;
  if (const auto* c = std::get_if<CategoricalRule>(&body)) {
    for (const auto& b : c->antecedent) out.insert(b.feature);
    for (const auto& b : c->consequent) out.insert(b.feature);
    return out;
  }
  const auto& q = quantitative();
  out.insert(q.target);
  for (const auto& v : q.formula.variables()) out.insert(v);
  for (const auto& g : q.guards) {
    if (const auto* given = std::get_if<GivenGuard>(&g)) {
      out.insert(given->feature);
    } else {
      for (const auto& v : std::get<NonzeroGuard>(g).expr.variables()) out.insert(v);
    }
  }
  return out;
}

namespace {

std::string join_bindings(const std::vector<Binding>& bindings) {
  std::string out;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (i) out += " and ";
    out += to_string(bindings[i]);
  }
  return out;
}

}  // namespace

std::string to_string(const Rule& rule) {
  if (rule.is_categorical()) {
    const auto& c = rule.categorical();
    return "If " + join_bindings(c.antecedent) + (c.reciprocal ? " ⇔ " : " → ") +
           join_bindings(c.consequent);
  }
  const auto& q = rule.quantitative();
  std::string given;
  std::string nonzero;
  for (const auto& g : q.guards) {
    if (const auto* gv = std::get_if<GivenGuard>(&g)) {
      given += given.empty() ? "" : ", ";
      given += gv->feature;
    } else {
      nonzero += nonzero.empty() ? "" : ", ";
      nonzero += to_string(std::get<NonzeroGuard>(g).expr) + " ≠ 0";
    }
  }
  std::string out = "If ";
  if (!given.empty()) out += given + " given";
  if (!nonzero.empty()) out += (given.empty() ? "" : " and ") + nonzero;
  if (given.empty() && nonzero.empty()) out += "always";
  out += " then " + q.target + " = " + to_string(q.formula);
  return out;
}

}  // namespace col
