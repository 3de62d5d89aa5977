#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "col/classifier.hpp"
#include "col/engine.hpp"
#include "col/knowledge_base.hpp"

namespace col {

// Posterior over the owning concept's classes for one observed value.
Posterior classify(const KnowledgeBase& kb, const std::string& feature, const Value& value);

// Combined posterior from every supervised feature of `concept_name` bound in
// the facts. Unbound features are left out, which is the same as never
// having included them.
Posterior classify_instance(const KnowledgeBase& kb, const std::string& concept_name, const FactSet& facts);

// Adds the proposed class to the concept; supervised histograms grow with it.
std::string apply_proposal(KnowledgeBase& kb, const std::string& concept_name, const ClassProposal& proposal);

// Removes every class of the concept whose support is below `min_support`.
std::vector<std::string> suppress_low_support(KnowledgeBase& kb, const std::string& concept_name,
                                              std::uint64_t min_support);

// Orders two fact sets by the list position of an ordinal feature's value.
// Throws NotOrdinal, or Unbound when either side lacks the feature.
std::strong_ordering compare_ordinal(const KnowledgeBase& kb, const FactSet& a, const FactSet& b,
                                     const std::string& feature);

}  // namespace col
