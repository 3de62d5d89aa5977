#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "col/classifier.hpp"
#include "col/feature.hpp"
#include "col/rule.hpp"

namespace col {

// Gas constant in J/(mol·K); the constant table is extensible per KB.
inline constexpr double kGasConstant = 8.314;

struct ConceptClass {
  std::string name;
  std::uint64_t support = 0;

  friend bool operator==(const ConceptClass&, const ConceptClass&) = default;
};

struct Concept {
  std::string id;  // "K1", "K2", ... in creation order
  std::string name;
  std::map<std::string, ConceptClass> classes;
  std::set<std::string> features;     // features owned by the concept
  std::set<std::string> subconcepts;  // composition links, e.g. Glasses -> Material

  friend bool operator==(const Concept&, const Concept&) = default;
};

// Directed verb-labelled arc between two concepts; causality flows from
// source to target.
struct Frame {
  std::string name;
  std::string source;
  std::string target;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> externals;
  std::vector<Rule> rules;

  bool is_input(std::string_view f) const;
  bool is_output(std::string_view f) const;
  bool is_external(std::string_view f) const;
  bool declares(std::string_view f) const { return is_input(f) || is_output(f) || is_external(f); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameSpec {
  std::string name;
  std::string source;
  std::string target;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> externals;
};

struct Dictionaries {
  std::set<std::string> u_concepts;                         // adjectives
  std::set<std::string> concepts;                           // nouns
  std::map<std::string, std::vector<std::string>> features;  // value lists

  friend bool operator==(const Dictionaries&, const Dictionaries&) = default;
};

// Raw state of a knowledge base. Assembling one by hand bypasses every
// invariant check; use KnowledgeBase::validate on the result.
struct KbData {
  std::map<std::string, Concept> concepts;               // by name
  std::map<std::string, FeatureDef> features;            // by name
  std::map<std::string, HistogramClassifier> classifiers;  // by id
  std::map<std::string, Frame> frames;                   // by name
  Dictionaries dictionaries;
  std::map<std::string, double> constants{{"R", kGasConstant}};
  std::uint64_t revision = 0;
  std::uint64_t next_concept = 1;
  std::uint64_t next_classifier = 1;

  friend bool operator==(const KbData&, const KbData&) = default;
};

struct Violation {
  std::string element;
  std::string invariant;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct AddClassResult {
  std::string name;
  bool created = false;  // false: the class already existed, nothing changed
};

struct SuppressResult {
  std::vector<std::string> features;
  std::vector<std::string> classes;
  std::vector<std::string> frames;
  std::size_t rules = 0;
};

// Concepts (Δ), features (F), classifiers (E), per-concept classes (Ω),
// frames and the three dictionaries. Every accepted mutation bumps the
// revision; a rejected one throws and leaves the state untouched.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  static KnowledgeBase from_data(KbData data) {
    KnowledgeBase kb;
    kb.data_ = std::move(data);
    return kb;
  }

  const KbData& data() const { return data_; }
  const std::map<std::string, Concept>& concepts() const { return data_.concepts; }
  const std::map<std::string, FeatureDef>& features() const { return data_.features; }
  const std::map<std::string, HistogramClassifier>& classifiers() const { return data_.classifiers; }
  const std::map<std::string, Frame>& frames() const { return data_.frames; }
  const Dictionaries& dictionaries() const { return data_.dictionaries; }
  const std::map<std::string, double>& constants() const { return data_.constants; }
  std::uint64_t revision() const { return data_.revision; }

  std::size_t concept_count() const { return data_.concepts.size(); }        // p
  std::size_t feature_count() const { return data_.features.size(); }        // j
  std::size_t classifier_count() const { return data_.classifiers.size(); }  // l

  // Name lookups match exactly first, then by name key.
  const Concept* find_concept(std::string_view name) const;
  const FeatureDef* find_feature(std::string_view name) const;
  const Frame* find_frame(std::string_view name) const;
  const Concept& concept_named(std::string_view name) const;  // UnknownConcept
  const FeatureDef& feature(std::string_view name) const;     // UnknownReference
  const Frame& frame(std::string_view name) const;            // UnknownFrame
  const HistogramClassifier& classifier_for(std::string_view feature) const;
  // Concept owning a class with this name, if exactly one does.
  const Concept* concept_of_class(std::string_view cls) const;

  std::string add_concept(std::string_view name);
  AddClassResult add_class(std::string_view concept_name, std::string_view cls);
  void add_subconcept(std::string_view parent, std::string_view child);
  // Binds a fresh classifier to the new feature. A non-empty owner makes the
  // classifier supervised over the owner's classes.
  std::string add_feature(FeatureDef def, std::string_view owner = {});
  const FeatureDef& extend_feature_domain(std::string_view feature, std::string_view value);
  std::string add_frame(const FrameSpec& spec);
  // Canonicalises names, resolves constants, validates and appends. Returns
  // the rule's index; an identical existing rule is returned unchanged.
  std::size_t add_rule(std::string_view frame, Rule rule);
  // Name-resolved copy of `rule` as add_rule would store it.
  Rule bind_rule(const Frame& frame, const Rule& rule) const;

  void suppress_class(std::string_view concept_name, std::string_view cls);
  SuppressResult suppress_feature(std::string_view feature, bool cascade = false);
  SuppressResult suppress_concept(std::string_view name, bool cascade = false);

  // Records one observation in the feature's classifier; a class label is
  // required when the classifier is supervised.
  void observe(std::string_view feature, const Value& value,
               std::optional<std::string_view> cls = std::nullopt);
  void set_constant(std::string_view name, double value);
  void set_smoothing(std::string_view feature, double alpha);

  std::vector<Violation> validate() const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  Concept& concept_mut(std::string_view name);
  void bump() { ++data_.revision; }

  KbData data_;
};

// Names of elements added or removed between two states.
struct KbDelta {
  std::vector<std::string> added_concepts, removed_concepts;
  std::vector<std::string> added_classes, removed_classes;  // "Concept/Class"
  std::vector<std::string> added_features, removed_features;
  std::vector<std::string> added_frames, removed_frames;
  std::vector<std::string> added_rules, removed_rules;  // "Frame: rule"

  bool empty() const;
};

KbDelta diff(const KnowledgeBase& before, const KnowledgeBase& after);

// Single-writer holder. Readers take immutable snapshots; a writer works on a
// private copy that is published only if the mutation returns normally.
class KbStore {
 public:
  explicit KbStore(KnowledgeBase kb = {})
      : current_(std::make_shared<const KnowledgeBase>(std::move(kb))) {}

  std::shared_ptr<const KnowledgeBase> snapshot() const {
    std::lock_guard lock(publish_);
    return current_;
  }

  template <class Fn>
  decltype(auto) mutate(Fn&& fn) {
    std::lock_guard writer(writer_);
    auto next = std::make_shared<KnowledgeBase>(*snapshot());
    if constexpr (std::is_void_v<std::invoke_result_t<Fn, KnowledgeBase&>>) {
      std::invoke(std::forward<Fn>(fn), *next);
      publish(std::move(next));
    } else {
      auto result = std::invoke(std::forward<Fn>(fn), *next);
      publish(std::move(next));
      return result;
    }
  }

  void replace(KnowledgeBase kb) {
    std::lock_guard writer(writer_);
    publish(std::make_shared<KnowledgeBase>(std::move(kb)));
  }

 private:
  void publish(std::shared_ptr<KnowledgeBase> next) {
    std::lock_guard lock(publish_);
    current_ = std::move(next);
  }

  mutable std::mutex publish_;
  std::mutex writer_;
  std::shared_ptr<const KnowledgeBase> current_;
};

}  // namespace col
