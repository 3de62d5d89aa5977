#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "col/dsl.hpp"
#include "col/engine.hpp"
#include "col/knowledge_base.hpp"

namespace col {

enum class UtteranceKind { clarification, acknowledgment, question_back, answer };
std::string_view to_string(UtteranceKind kind);

// Mutation awaiting the trainer's yes/no. For a noun, "yes" makes it a class
// of `concept_name`; "no" makes it a concept of its own. With no concept in
// context the question is whether to create the concept at all.
struct ProposedMutation {
  std::string noun;
  std::optional<std::string> concept_name;

  friend bool operator==(const ProposedMutation&, const ProposedMutation&) = default;
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::set<std::string> expected;
  std::string message;
};

struct MachineUtterance {
  UtteranceKind kind = UtteranceKind::acknowledgment;
  std::string text;
  std::optional<ProposedMutation> proposal;
  std::optional<Answer> answer;
  std::optional<ParseDiagnostic> parse_error;
};

enum class Speaker { trainer, machine };

struct TranscriptEntry {
  Speaker speaker;
  std::string utterance;
  std::uint64_t revision;
};

// One trainer's dialogue with the knowledge base. Single-threaded; each
// command is applied as one write through the store, so a rejected command
// changes neither the KB nor the session.
class Session {
 public:
  Session(std::string id, std::shared_ptr<KbStore> store, std::optional<std::string> current_concept = std::nullopt);

  const std::string& id() const { return id_; }
  const std::optional<std::string>& current_concept() const { return current_concept_; }
  const std::optional<std::string>& current_class() const { return current_class_; }
  const std::optional<ProposedMutation>& pending() const { return pending_; }
  const FactSet& facts() const { return facts_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  KbStore& store() { return *store_; }

  // Throws the underlying kb-core error, or ProtocolError for a confirmation
  // with nothing pending or a declaration while a question is open.
  MachineUtterance apply(const Command& cmd);

  // Parse, apply and record both sides in the transcript. Syntax errors come
  // back as a clarification carrying the diagnostic.
  MachineUtterance step(std::string_view text, std::size_t line = 1);

 private:
  MachineUtterance noun(const DeclareNoun& n);
  MachineUtterance confirm(const Confirm& c);
  MachineUtterance adjective(const DeclareAdjective& a);
  MachineUtterance verb(const DeclareVerb& v);
  MachineUtterance rule(const DeclareRule& r);
  MachineUtterance fact(const StateFact& f);
  MachineUtterance ask(const Ask& a);

  std::string id_;
  std::shared_ptr<KbStore> store_;
  std::optional<std::string> current_concept_;
  std::optional<std::string> current_class_;
  std::optional<ProposedMutation> pending_;
  FactSet facts_;
  std::vector<TranscriptEntry> transcript_;
};

struct Snapshot {
  std::string name;
  KnowledgeBase kb;
};

struct ReplayOptions {
  std::optional<std::string> current_concept;
};

struct ReplayResult {
  KnowledgeBase kb;
  std::vector<Snapshot> snapshots;
  std::vector<TranscriptEntry> transcript;
};

// Feeds a whole script through a fresh session over `kb`. Deterministic. The
// first failing line aborts, with its line number in the error.
ReplayResult replay_script(const KnowledgeBase& kb, std::string_view script, const ReplayOptions& options = {});

// Human-readable one-line summary of an answer, e.g. "Quality vision=Bad (via TO USE backward)".
std::string describe(const Answer& answer, const std::string& goal);

}  // namespace col
