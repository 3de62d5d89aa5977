#include "col/knowledge_base.hpp"

#include <algorithm>
#include <cmath>

#include "col/error.hpp"

namespace col {

namespace {

template <class Map>
auto find_named(Map& map, std::string_view name) -> decltype(&map.begin()->second) {
  if (auto it = map.find(std::string(name)); it != map.end()) return &it->second;
  const std::string key = name_key(name);
  for (auto& [n, v] : map) {
    if (name_key(n) == key) return &v;
  }
  return nullptr;
}

bool contains(const std::vector<std::string>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void erase_value(std::vector<std::string>& v, std::string_view x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
}

std::vector<Binding> sorted(std::vector<Binding> b) {
  std::sort(b.begin(), b.end());
  return b;
}

bool protected_divisor(const Expression& d, const std::vector<Guard>& guards) {
  for (const auto& g : guards) {
    if (const auto* nz = std::get_if<NonzeroGuard>(&g); nz && nz->expr == d) return true;
  }
  switch (d.kind()) {
    case Expression::Kind::number:
    case Expression::Kind::constant: return d.value() != 0.0;
    case Expression::Kind::binary:
      return d.op() == '*' && protected_divisor(d.lhs(), guards) && protected_divisor(d.rhs(), guards);
    default: return false;
  }
}

Expression rebind_constants(const Expression& e, const std::map<std::string, double>& table) {
  switch (e.kind()) {
    case Expression::Kind::constant:
      if (auto it = table.find(e.name()); it != table.end()) return Expression::constant(e.name(), it->second);
      return e;
    case Expression::Kind::binary:
      return Expression::binary(e.op(), rebind_constants(e.lhs(), table), rebind_constants(e.rhs(), table));
    default: return e;
  }
}

}  // namespace

bool Frame::is_input(std::string_view f) const { return contains(inputs, f); }
bool Frame::is_output(std::string_view f) const { return contains(outputs, f); }
bool Frame::is_external(std::string_view f) const { return contains(externals, f); }

const Concept* KnowledgeBase::find_concept(std::string_view name) const {
  return find_named(data_.concepts, name);
}
const FeatureDef* KnowledgeBase::find_feature(std::string_view name) const {
  return find_named(data_.features, name);
}
const Frame* KnowledgeBase::find_frame(std::string_view name) const {
  return find_named(data_.frames, name);
}

const Concept& KnowledgeBase::concept_named(std::string_view name) const {
  if (const auto* c = find_concept(name)) return *c;
  throw Error(ErrorCode::UnknownConcept, "no concept " + std::string(name));
}

Concept& KnowledgeBase::concept_mut(std::string_view name) {
  if (auto* c = find_named(data_.concepts, name)) return *c;
  throw Error(ErrorCode::UnknownConcept, "no concept " + std::string(name));
}

const FeatureDef& KnowledgeBase::feature(std::string_view name) const {
  if (const auto* f = find_feature(name)) return *f;
  throw Error(ErrorCode::UnknownReference, "no feature " + std::string(name));
}

const Frame& KnowledgeBase::frame(std::string_view name) const {
  if (const auto* f = find_frame(name)) return *f;
  throw Error(ErrorCode::UnknownFrame, "no frame " + std::string(name));
}

const HistogramClassifier& KnowledgeBase::classifier_for(std::string_view name) const {
  const auto& def = feature(name);
  auto it = data_.classifiers.find(def.classifier);
  if (it == data_.classifiers.end()) {
    throw Error(ErrorCode::UnknownReference, "feature " + def.name + " has no classifier");
  }
  return it->second;
}

const Concept* KnowledgeBase::concept_of_class(std::string_view cls) const {
  const Concept* found = nullptr;
  for (const auto& [name, c] : data_.concepts) {
    if (find_named(c.classes, cls)) {
      if (found) return nullptr;
      found = &c;
    }
  }
  return found;
}

std::string KnowledgeBase::add_concept(std::string_view name) {
  if (name_key(name).empty()) throw Error(ErrorCode::UnknownReference, "concept name is empty");
  if (const auto* existing = find_concept(name)) {
    throw Error(ErrorCode::DuplicateConcept, "concept " + existing->name + " already exists");
  }
  Concept c;
  c.id = "K" + std::to_string(data_.next_concept++);
  c.name = std::string(name);
  data_.dictionaries.concepts.insert(c.name);
  data_.concepts.emplace(c.name, std::move(c));
  bump();
  return std::string(name);
}

AddClassResult KnowledgeBase::add_class(std::string_view concept_name, std::string_view cls) {
  if (name_key(cls).empty()) throw Error(ErrorCode::UnknownReference, "class name is empty");
  Concept& owner = concept_mut(concept_name);
  if (const auto* existing = find_named(owner.classes, cls)) return {existing->name, false};
  const std::string name(cls);
  owner.classes.emplace(name, ConceptClass{name, 0});
  for (const auto& f : owner.features) {
    data_.classifiers.at(data_.features.at(f).classifier).add_class(name);
  }
  bump();
  return {name, true};
}

void KnowledgeBase::add_subconcept(std::string_view parent, std::string_view child) {
  const Concept& p = concept_named(parent);
  const Concept& c = concept_named(child);
  if (p.name == c.name) throw Error(ErrorCode::Inconsistent, "a concept cannot contain itself");
  if (p.subconcepts.contains(c.name)) return;
  // Reject links that would close a cycle: parent must not be reachable from child.
  std::vector<std::string> stack{c.name};
  std::set<std::string> seen;
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    if (cur == p.name) {
      throw Error(ErrorCode::Inconsistent, "link " + p.name + " -> " + c.name + " would form a cycle");
    }
    if (!seen.insert(cur).second) continue;
    for (const auto& s : data_.concepts.at(cur).subconcepts) stack.push_back(s);
  }
  concept_mut(p.name).subconcepts.insert(c.name);
  bump();
}

std::string KnowledgeBase::add_feature(FeatureDef def, std::string_view owner) {
  if (name_key(def.name).empty()) throw Error(ErrorCode::UnknownReference, "feature name is empty");
  if (const auto* existing = find_feature(def.name)) {
    throw Error(ErrorCode::DuplicateFeature, "feature " + existing->name + " already exists");
  }
  if (def.is_numeric()) {
    if (!def.values.empty()) throw Error(ErrorCode::UnknownValue, "numeric feature takes no labels");
    if (def.bins == 0) throw Error(ErrorCode::UnknownValue, "numeric feature needs at least one bin");
    if (def.min && def.max && !(*def.max > *def.min)) {
      throw Error(ErrorCode::UnknownValue, "numeric range of " + def.name + " is empty");
    }
  } else {
    std::set<std::string> keys;
    for (const auto& v : def.values) {
      if (name_key(v).empty()) throw Error(ErrorCode::UnknownValue, "empty value label");
      if (!keys.insert(name_key(v)).second) {
        throw Error(ErrorCode::DuplicateValue, "value " + v + " repeated in " + def.name);
      }
    }
  }
  const Concept* owning = owner.empty() ? nullptr : &concept_named(owner);

  def.owner = owning ? owning->name : std::string();
  def.classifier = "e" + std::to_string(data_.next_classifier);
  std::vector<std::string> classes;
  if (owning) {
    for (const auto& [n, c] : owning->classes) classes.push_back(n);
  }
  HistogramClassifier classifier(def.classifier, def.name, def.bin_labels(),
                                 owning ? ClassifierMode::supervised : ClassifierMode::unsupervised,
                                 std::move(classes));

  ++data_.next_classifier;
  if (owning) concept_mut(owning->name).features.insert(def.name);
  data_.dictionaries.u_concepts.insert(def.name);
  data_.dictionaries.features[def.name] = def.values;
  data_.classifiers.emplace(def.classifier, std::move(classifier));
  const std::string name = def.name;
  data_.features.emplace(name, std::move(def));
  bump();
  return name;
}

const FeatureDef& KnowledgeBase::extend_feature_domain(std::string_view feature_name,
                                                       std::string_view value) {
  auto* def = find_named(data_.features, feature_name);
  if (!def) throw Error(ErrorCode::UnknownReference, "no feature " + std::string(feature_name));
  if (def->is_numeric()) throw Error(ErrorCode::ModeError, "numeric feature " + def->name + " has no labels");
  if (name_key(value).empty()) throw Error(ErrorCode::UnknownValue, "empty value label");
  if (def->value_index(value)) {
    throw Error(ErrorCode::DuplicateValue, std::string(value) + " is already a value of " + def->name);
  }
  def->values.emplace_back(value);
  data_.classifiers.at(def->classifier).add_bin(std::string(value));
  data_.dictionaries.features[def->name] = def->values;
  bump();
  return *def;
}

std::string KnowledgeBase::add_frame(const FrameSpec& spec) {
  if (name_key(spec.name).empty()) throw Error(ErrorCode::UnknownReference, "frame name is empty");
  if (const auto* existing = find_frame(spec.name)) {
    throw Error(ErrorCode::DuplicateFrame, "frame " + existing->name + " already exists");
  }
  const auto endpoint = [&](const std::string& n) {
    const auto* c = find_concept(n);
    if (!c) throw Error(ErrorCode::UnknownReference, "frame " + spec.name + " refers to unknown concept " + n);
    return c->name;
  };
  const auto features = [&](const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& n : names) {
      const auto* f = find_feature(n);
      if (!f) throw Error(ErrorCode::UnknownReference, "frame " + spec.name + " refers to unknown feature " + n);
      if (!contains(out, f->name)) out.push_back(f->name);
    }
    return out;
  };
  Frame frame;
  frame.name = spec.name;
  frame.source = endpoint(spec.source);
  frame.target = endpoint(spec.target);
  frame.inputs = features(spec.inputs);
  frame.outputs = features(spec.outputs);
  frame.externals = features(spec.externals);
  data_.frames.emplace(frame.name, std::move(frame));
  bump();
  return spec.name;
}

Rule KnowledgeBase::bind_rule(const Frame& fr, const Rule& rule) const {
  const auto declared = [&](const std::string& name, bool want_output, bool any_role) {
    const auto* def = find_feature(name);
    if (!def || !fr.declares(def->name)) {
      throw Error(ErrorCode::UnknownReference, "feature " + name + " is not declared in frame " + fr.name);
    }
    const bool ok = any_role || (want_output ? fr.is_output(def->name)
                                             : (fr.is_input(def->name) || fr.is_external(def->name)));
    if (!ok) {
      throw Error(ErrorCode::UnknownReference,
                  "feature " + def->name + (want_output ? " is not an output" : " is not an input") +
                      " of frame " + fr.name);
    }
    return def;
  };

  if (rule.is_categorical()) {
    const auto& in = rule.categorical();
    const auto side = [&](const std::vector<Binding>& bindings, bool outputs) {
      if (bindings.empty()) throw Error(ErrorCode::Inconsistent, "rule clause is empty");
      std::vector<Binding> out;
      for (const auto& b : bindings) {
        const FeatureDef* def = declared(b.feature, outputs, false);
        if (def->is_numeric() || !is_label(b.value)) {
          throw Error(ErrorCode::UnknownValue, "categorical rule binds numeric feature " + def->name);
        }
        auto label = def->find_value(std::get<std::string>(b.value));
        if (!label) {
          throw Error(ErrorCode::UnknownValue,
                      std::get<std::string>(b.value) + " is not a value of " + def->name);
        }
        Binding bound{def->name, *label};
        auto clash = std::find_if(out.begin(), out.end(), [&](const Binding& o) { return o.feature == def->name; });
        if (clash != out.end()) {
          if (!(clash->value == bound.value)) {
            throw Error(ErrorCode::Inconsistent, "clause binds " + def->name + " twice");
          }
          continue;
        }
        out.push_back(std::move(bound));
      }
      return out;
    };
    return Rule{CategoricalRule{side(in.antecedent, false), side(in.consequent, true), in.reciprocal}};
  }

  const auto& in = rule.quantitative();
  std::function<Expression(const Expression&)> resolve = [&](const Expression& e) -> Expression {
    switch (e.kind()) {
      case Expression::Kind::number: return e;
      case Expression::Kind::binary: return Expression::binary(e.op(), resolve(e.lhs()), resolve(e.rhs()));
      case Expression::Kind::constant:
      case Expression::Kind::variable: break;
    }
    if (const auto* def = find_feature(e.name()); def && fr.declares(def->name)) {
      if (!def->is_numeric()) {
        throw Error(ErrorCode::UnknownValue, "formula uses non-numeric feature " + def->name);
      }
      return Expression::variable(def->name);
    }
    if (auto it = data_.constants.find(e.name()); it != data_.constants.end()) {
      return Expression::constant(it->first, it->second);
    }
    throw Error(ErrorCode::UnknownReference,
                "symbol " + e.name() + " is neither a feature of frame " + fr.name + " nor a constant");
  };

  QuantitativeRule out{{}, {}, resolve(in.formula)};
  const FeatureDef* target = declared(in.target, true, false);
  if (!target->is_numeric()) throw Error(ErrorCode::UnknownValue, "formula target " + target->name + " is not numeric");
  out.target = target->name;
  for (const auto& g : in.guards) {
    if (const auto* given = std::get_if<GivenGuard>(&g)) {
      out.guards.emplace_back(GivenGuard{declared(given->feature, false, true)->name});
    } else {
      out.guards.emplace_back(NonzeroGuard{resolve(std::get<NonzeroGuard>(g).expr)});
    }
  }
  for (const auto& d : out.formula.divisors()) {
    if (!protected_divisor(d, out.guards)) {
      throw Error(ErrorCode::UnguardedDivision, "division by " + to_string(d) + " has no nonzero guard");
    }
  }
  for (const auto& g : out.guards) {
    if (const auto* nz = std::get_if<NonzeroGuard>(&g)) {
      for (const auto& d : nz->expr.divisors()) {
        if (!protected_divisor(d, out.guards)) {
          throw Error(ErrorCode::UnguardedDivision, "division by " + to_string(d) + " has no nonzero guard");
        }
      }
    }
  }
  return Rule{std::move(out)};
}

std::size_t KnowledgeBase::add_rule(std::string_view frame_name, Rule rule) {
  auto* fr = find_named(data_.frames, frame_name);
  if (!fr) throw Error(ErrorCode::UnknownReference, "no frame " + std::string(frame_name));
  Rule bound = bind_rule(*fr, rule);

  for (std::size_t i = 0; i < fr->rules.size(); ++i) {
    if (fr->rules[i] == bound) return i;
  }
  if (bound.is_reciprocal()) {
    const auto a = sorted(bound.categorical().antecedent);
    const auto c = sorted(bound.categorical().consequent);
    for (const auto& other : fr->rules) {
      if (!other.is_reciprocal()) continue;
      const auto oa = sorted(other.categorical().antecedent);
      const auto oc = sorted(other.categorical().consequent);
      if ((oa == a) != (oc == c)) {
        throw Error(ErrorCode::ReciprocityConflict,
                    "'" + to_string(bound) + "' contradicts '" + to_string(other) + "' in frame " + fr->name);
      }
    }
  }
  fr->rules.push_back(std::move(bound));
  bump();
  return fr->rules.size() - 1;
}

void KnowledgeBase::suppress_class(std::string_view concept_name, std::string_view cls) {
  Concept& owner = concept_mut(concept_name);
  const auto* existing = find_named(owner.classes, cls);
  if (!existing) throw Error(ErrorCode::UnknownClass, "concept " + owner.name + " has no class " + std::string(cls));
  const std::string name = existing->name;
  owner.classes.erase(name);
  for (const auto& f : owner.features) data_.classifiers.at(data_.features.at(f).classifier).remove_class(name);
  bump();
}

SuppressResult KnowledgeBase::suppress_feature(std::string_view feature_name, bool cascade) {
  const auto* def = find_feature(feature_name);
  if (!def) throw Error(ErrorCode::UnknownReference, "no feature " + std::string(feature_name));
  const std::string name = def->name;

  SuppressResult result;
  for (const auto& [fname, fr] : data_.frames) {
    for (const auto& r : fr.rules) {
      if (r.features().contains(name)) ++result.rules;
    }
  }
  if (result.rules > 0 && !cascade) {
    throw Error(ErrorCode::InUse, "feature " + name + " is referenced by " + std::to_string(result.rules) + " rule(s)");
  }
  for (auto& [fname, fr] : data_.frames) {
    std::erase_if(fr.rules, [&](const Rule& r) { return r.features().contains(name); });
    erase_value(fr.inputs, name);
    erase_value(fr.outputs, name);
    erase_value(fr.externals, name);
  }
  if (!def->owner.empty()) data_.concepts.at(def->owner).features.erase(name);
  data_.classifiers.erase(def->classifier);
  data_.dictionaries.u_concepts.erase(name);
  data_.dictionaries.features.erase(name);
  data_.features.erase(name);
  result.features.push_back(name);
  bump();
  return result;
}

SuppressResult KnowledgeBase::suppress_concept(std::string_view concept_name, bool cascade) {
  const Concept& target = concept_named(concept_name);
  const std::string name = target.name;

  std::vector<std::string> frames;
  for (const auto& [fname, fr] : data_.frames) {
    if (fr.source == name || fr.target == name) frames.push_back(fname);
  }
  std::vector<std::string> parents;
  for (const auto& [cname, c] : data_.concepts) {
    if (c.subconcepts.contains(name)) parents.push_back(cname);
  }
  if (!cascade && (!frames.empty() || !parents.empty() || !target.features.empty())) {
    throw Error(ErrorCode::InUse, "concept " + name + " is referenced by frames, links or features");
  }

  // Work on a copy so a failure half-way leaves this KB untouched.
  KnowledgeBase next = *this;
  SuppressResult result;
  for (const auto& f : frames) {
    result.rules += next.data_.frames.at(f).rules.size();
    next.data_.frames.erase(f);
    result.frames.push_back(f);
  }
  for (const auto& f : target.features) {
    auto sub = next.suppress_feature(f, true);
    result.rules += sub.rules;
    result.features.push_back(f);
  }
  for (const auto& p : parents) next.data_.concepts.at(p).subconcepts.erase(name);
  for (const auto& [cls, c] : target.classes) result.classes.push_back(cls);
  next.data_.concepts.erase(name);
  next.data_.dictionaries.concepts.erase(name);
  next.data_.revision = data_.revision + 1;
  *this = std::move(next);
  return result;
}

void KnowledgeBase::observe(std::string_view feature_name, const Value& value,
                            std::optional<std::string_view> cls) {
  const FeatureDef& def = feature(feature_name);
  const std::string bin = def.bin_for(value);
  auto& classifier = data_.classifiers.at(def.classifier);
  if (classifier.mode() == ClassifierMode::unsupervised) {
    if (cls) throw Error(ErrorCode::ModeError, "classifier of " + def.name + " is unsupervised");
    classifier.observe(bin);
    bump();
    return;
  }
  if (!cls) throw Error(ErrorCode::MissingLabel, "feature " + def.name + " needs a class label");
  Concept& owner = concept_mut(def.owner);
  auto* target = find_named(owner.classes, *cls);
  if (!target) throw Error(ErrorCode::UnknownClass, "concept " + owner.name + " has no class " + std::string(*cls));
  classifier.observe(bin, target->name);
  ++target->support;
  bump();
}

void KnowledgeBase::set_constant(std::string_view name, double value) {
  if (name_key(name).empty()) throw Error(ErrorCode::UnknownReference, "constant name is empty");
  if (!std::isfinite(value)) throw Error(ErrorCode::UnknownValue, "constant must be finite");
  data_.constants[std::string(name)] = value;
  for (auto& [fname, fr] : data_.frames) {
    for (auto& r : fr.rules) {
      auto* q = std::get_if<QuantitativeRule>(&r.body);
      if (!q) continue;
      q->formula = rebind_constants(q->formula, data_.constants);
      for (auto& g : q->guards) {
        if (auto* nz = std::get_if<NonzeroGuard>(&g)) nz->expr = rebind_constants(nz->expr, data_.constants);
      }
    }
  }
  bump();
}

void KnowledgeBase::set_smoothing(std::string_view feature_name, double alpha) {
  const FeatureDef& def = feature(feature_name);
  data_.classifiers.at(def.classifier).set_alpha(alpha);
  bump();
}

std::vector<Violation> KnowledgeBase::validate() const {
  std::vector<Violation> out;
  const auto report = [&](std::string element, std::string invariant, std::string detail = {}) {
    out.push_back({std::move(element), std::move(invariant), std::move(detail)});
  };

  // Classifier/feature bijection.
  for (const auto& [name, def] : data_.features) {
    auto it = data_.classifiers.find(def.classifier);
    if (it == data_.classifiers.end() || it->second.feature() != name) {
      report("feature " + name, "classifier/feature bijection", "no classifier bound to the feature");
    }
  }
  for (const auto& [id, c] : data_.classifiers) {
    auto it = data_.features.find(c.feature());
    if (it == data_.features.end() || it->second.classifier != id) {
      report("classifier " + id, "classifier/feature bijection",
             "classifier is not the one bound to feature " + c.feature());
    }
  }

  for (const auto& [name, def] : data_.features) {
    if (def.name != name) report("feature " + name, "identity", "stored under a different name");
    std::set<std::string> keys;
    for (const auto& v : def.values) {
      if (!keys.insert(name_key(v)).second) report("feature " + name, "unique domain labels", v);
    }
    if (def.is_numeric() && !def.values.empty()) report("feature " + name, "numeric domain", "has labels");
    if (!def.owner.empty()) {
      auto owner = data_.concepts.find(def.owner);
      if (owner == data_.concepts.end() || !owner->second.features.contains(name)) {
        report("feature " + name, "owner resolves", def.owner);
      }
    }
    auto it = data_.classifiers.find(def.classifier);
    if (it == data_.classifiers.end()) continue;
    const auto& c = it->second;
    if (c.bins() != def.bin_labels()) report("classifier " + c.id(), "bins equal feature domain");
    const bool supervised = !def.owner.empty();
    if (supervised != (c.mode() == ClassifierMode::supervised)) {
      report("classifier " + c.id(), "supervised iff feature has an owning concept");
    } else if (supervised) {
      auto owner = data_.concepts.find(def.owner);
      if (owner != data_.concepts.end()) {
        std::vector<std::string> classes;
        for (const auto& [cls, cc] : owner->second.classes) classes.push_back(cls);
        if (classes != c.classes()) report("classifier " + c.id(), "histograms track the concept's classes");
      }
    }
    for (const auto& [cls, h] : c.class_histograms()) {
      if (h.size() != c.bins().size()) report("classifier " + c.id(), "histogram size", cls);
    }
    if (c.mode() == ClassifierMode::unsupervised && c.counts().size() != c.bins().size()) {
      report("classifier " + c.id(), "histogram size");
    }
  }

  for (const auto& [name, c] : data_.concepts) {
    if (c.name != name) report("concept " + name, "identity", "stored under a different name");
    for (const auto& [cls, cc] : c.classes) {
      if (cc.name != cls) report("class " + name + "/" + cls, "identity");
    }
    for (const auto& f : c.features) {
      auto it = data_.features.find(f);
      if (it == data_.features.end() || it->second.owner != name) {
        report("concept " + name, "feature references resolve", f);
      }
    }
    for (const auto& s : c.subconcepts) {
      if (!data_.concepts.contains(s)) report("concept " + name, "subconcept links resolve", s);
    }
  }
  // Subconcept links must be acyclic: iterative three-colour DFS.
  {
    std::map<std::string, int> colour;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& n) {
      colour[n] = 1;
      auto it = data_.concepts.find(n);
      if (it != data_.concepts.end()) {
        for (const auto& s : it->second.subconcepts) {
          if (colour[s] == 1) return true;
          if (colour[s] == 0 && cyclic(s)) return true;
        }
      }
      colour[n] = 2;
      return false;
    };
    for (const auto& [name, c] : data_.concepts) {
      if (colour[name] == 0 && cyclic(name)) {
        report("concept " + name, "subconcept links acyclic");
        break;
      }
    }
  }

  for (const auto& [name, fr] : data_.frames) {
    if (fr.name != name) report("frame " + name, "identity");
    if (!data_.concepts.contains(fr.source)) report("frame " + name, "frame endpoints exist", fr.source);
    if (!data_.concepts.contains(fr.target)) report("frame " + name, "frame endpoints exist", fr.target);
    for (const auto* list : {&fr.inputs, &fr.outputs, &fr.externals}) {
      for (const auto& f : *list) {
        if (!data_.features.contains(f)) report("frame " + name, "frame features exist", f);
      }
    }
    for (std::size_t i = 0; i < fr.rules.size(); ++i) {
      const std::string element = "rule " + name + "#" + std::to_string(i);
      try {
        if (!(bind_rule(fr, fr.rules[i]) == fr.rules[i])) report(element, "rule is canonical");
      } catch (const Error& e) {
        report(element, "rule references resolve", e.what());
      }
      if (!fr.rules[i].is_reciprocal()) continue;
      for (std::size_t k = i + 1; k < fr.rules.size(); ++k) {
        if (!fr.rules[k].is_reciprocal()) continue;
        const bool same_a = sorted(fr.rules[i].categorical().antecedent) == sorted(fr.rules[k].categorical().antecedent);
        const bool same_c = sorted(fr.rules[i].categorical().consequent) == sorted(fr.rules[k].categorical().consequent);
        if (same_a != same_c) {
          report(element, "reciprocal rules are functional both ways", "conflicts with #" + std::to_string(k));
        }
      }
    }
  }

  const auto& d = data_.dictionaries;
  for (const auto& u : d.u_concepts) {
    if (!data_.features.contains(u)) report("u-concept " + u, "dictionary entry resolves");
  }
  for (const auto& c : d.concepts) {
    if (!data_.concepts.contains(c)) report("concept entry " + c, "dictionary entry resolves");
  }
  for (const auto& [f, values] : d.features) {
    auto it = data_.features.find(f);
    if (it == data_.features.end() || it->second.values != values) {
      report("feature entry " + f, "dictionary entry resolves");
    }
  }
  for (const auto& [name, c] : data_.concepts) {
    if (!d.concepts.contains(name)) report("concept " + name, "listed in the concept dictionary");
  }
  for (const auto& [name, def] : data_.features) {
    if (!d.u_concepts.contains(name) || !d.features.contains(name)) {
      report("feature " + name, "listed in the feature dictionaries");
    }
  }
  return out;
}

bool KbDelta::empty() const {
  return added_concepts.empty() && removed_concepts.empty() && added_classes.empty() &&
         removed_classes.empty() && added_features.empty() && removed_features.empty() &&
         added_frames.empty() && removed_frames.empty() && added_rules.empty() && removed_rules.empty();
}

namespace {

void set_diff(const std::set<std::string>& before, const std::set<std::string>& after,
              std::vector<std::string>& added, std::vector<std::string>& removed) {
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(added));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(removed));
}

template <class Map>
std::set<std::string> keys(const Map& m) {
  std::set<std::string> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

std::set<std::string> class_keys(const KnowledgeBase& kb) {
  std::set<std::string> out;
  for (const auto& [name, c] : kb.concepts()) {
    for (const auto& [cls, cc] : c.classes) out.insert(name + "/" + cls);
  }
  return out;
}

std::set<std::string> rule_keys(const KnowledgeBase& kb) {
  std::set<std::string> out;
  for (const auto& [name, fr] : kb.frames()) {
    for (const auto& r : fr.rules) out.insert(name + ": " + to_string(r));
  }
  return out;
}

}  // namespace

KbDelta diff(const KnowledgeBase& before, const KnowledgeBase& after) {
  KbDelta d;
  set_diff(keys(before.concepts()), keys(after.concepts()), d.added_concepts, d.removed_concepts);
  set_diff(class_keys(before), class_keys(after), d.added_classes, d.removed_classes);
  set_diff(keys(before.features()), keys(after.features()), d.added_features, d.removed_features);
  set_diff(keys(before.frames()), keys(after.frames()), d.added_frames, d.removed_frames);
  set_diff(rule_keys(before), rule_keys(after), d.added_rules, d.removed_rules);
  return d;
}

}  // namespace col
