#include "col/learning.hpp"

#include "col/error.hpp"

namespace col {

Posterior classify(const KnowledgeBase& kb, const std::string& feature, const Value& value) {
  const FeatureDef& def = kb.feature(feature);
  return kb.classifier_for(def.name).classify(def.bin_for(value));
}

Posterior classify_instance(const KnowledgeBase& kb, const std::string& concept_name, const FactSet& facts) {
  const Concept& owner = kb.concept_named(concept_name);
  const FactSet resolved = resolve_facts(kb, facts);
  std::vector<Posterior> parts;
  for (const auto& f : owner.features) {
    const Value* v = resolved.get(f);
    if (!v) continue;
    const FeatureDef& def = kb.feature(f);
    if (def.is_numeric() && !def.binnable()) continue;
    parts.push_back(classify(kb, f, *v));
  }
  return combine(parts);
}

std::string apply_proposal(KnowledgeBase& kb, const std::string& concept_name, const ClassProposal& proposal) {
  return kb.add_class(concept_name, proposal.suggested_name).name;
}

std::vector<std::string> suppress_low_support(KnowledgeBase& kb, const std::string& concept_name,
                                              std::uint64_t min_support) {
  const Concept& owner = kb.concept_named(concept_name);
  std::vector<std::string> doomed;
  for (const auto& [name, cls] : owner.classes) {
    if (cls.support < min_support) doomed.push_back(name);
  }
  const std::string canonical = owner.name;
  for (const auto& name : doomed) kb.suppress_class(canonical, name);
  return doomed;
}

std::strong_ordering compare_ordinal(const KnowledgeBase& kb, const FactSet& a, const FactSet& b,
                                     const std::string& feature) {
  const FeatureDef& def = kb.feature(feature);
  if (def.kind != FeatureKind::ordinal) throw Error(ErrorCode::NotOrdinal, "feature " + def.name + " is not ordinal");
  const auto position = [&](const FactSet& facts) {
    const Value* v = facts.get(def.name);
    if (!v) {
      for (const auto& [f, fact] : facts.facts) {
        if (same_name(f, def.name)) v = &fact.value;
      }
    }
    if (!v) throw Error(ErrorCode::Unbound, "feature " + def.name + " is not bound");
    const Binding bound = resolve_binding(kb, def.name, *v);
    return *def.value_index(std::get<std::string>(bound.value));
  };
  return position(a) <=> position(b);
}

}  // namespace col
