#include "col/session.hpp"

#include <cctype>

#include "col/error.hpp"

namespace col {

std::string_view to_string(UtteranceKind kind) {
  switch (kind) {
    case UtteranceKind::clarification: return "clarification";
    case UtteranceKind::acknowledgment: return "acknowledgment";
    case UtteranceKind::question_back: return "question-back";
    case UtteranceKind::answer: return "answer";
  }
  return "acknowledgment";
}

namespace {

MachineUtterance ack(std::string text) { return {UtteranceKind::acknowledgment, std::move(text), {}, {}, {}}; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : ", ") + i;
  return out;
}

}  // namespace

std::string describe(const Answer& answer, const std::string& goal) {
  switch (answer.status) {
    case AnswerStatus::exact: {
      std::string via;
      for (const auto& s : answer.derivations.front().steps) {
        via += (via.empty() ? "" : ", ") + s.frame + (s.direction == Direction::forward ? " forward" : " backward");
      }
      return goal + "=" + to_string(*answer.value) + (via.empty() ? " (given)" : " (via " + via + ")");
    }
    case AnswerStatus::approximate: {
      std::vector<std::string> values;
      for (const auto& v : answer.candidates) values.push_back(to_string(v));
      return goal + " is one of " + join(values) + "; missing " + join(answer.missing);
    }
    case AnswerStatus::unknown: break;
  }
  return "No deduction for " + goal;
}

Session::Session(std::string id, std::shared_ptr<KbStore> store, std::optional<std::string> current_concept)
    : id_(std::move(id)), store_(std::move(store)) {
  if (current_concept) current_concept_ = store_->snapshot()->concept_named(*current_concept).name;
}

MachineUtterance Session::apply(const Command& cmd) {
  const bool declaration = !std::holds_alternative<Nothing>(cmd.body) &&
                           !std::holds_alternative<Ask>(cmd.body) && !std::holds_alternative<Confirm>(cmd.body);
  if (pending_ && declaration) {
    throw Error(ErrorCode::ProtocolError, "answer the pending question about " + pending_->noun + " first (yes/no)");
  }
  return std::visit(
      [&](const auto& body) -> MachineUtterance {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, Nothing>) {
          return ack("OK");
        } else if constexpr (std::is_same_v<T, DeclareNoun>) {
          return noun(body);
        } else if constexpr (std::is_same_v<T, Confirm>) {
          return confirm(body);
        } else if constexpr (std::is_same_v<T, DeclareAdjective>) {
          return adjective(body);
        } else if constexpr (std::is_same_v<T, DeclareVerb>) {
          return verb(body);
        } else if constexpr (std::is_same_v<T, DeclareRule>) {
          return rule(body);
        } else if constexpr (std::is_same_v<T, StateFact>) {
          return fact(body);
        } else {
          return ask(body);
        }
      },
      cmd.body);
}

MachineUtterance Session::step(std::string_view text, std::size_t line) {
  MachineUtterance reply;
  try {
    reply = apply(parse_statement(text, line));
  } catch (const SyntaxError& e) {
    reply.kind = UtteranceKind::clarification;
    reply.text = "I did not understand: " + e.detail();
    reply.parse_error = ParseDiagnostic{e.pos().line, e.pos().column, e.expected(), e.detail()};
  }
  const auto revision = store_->snapshot()->revision();
  transcript_.push_back({Speaker::trainer, std::string(text), revision});
  transcript_.push_back({Speaker::machine, reply.text, revision});
  return reply;
}

MachineUtterance Session::noun(const DeclareNoun& n) {
  auto kb = store_->snapshot();
  if (n.under) {
    const std::string parent = kb->concept_named(*n.under).name;
    if (const auto* child = kb->find_concept(n.name)) {
      const std::string name = child->name;
      store_->mutate([&](KnowledgeBase& w) { w.add_subconcept(parent, name); });
      current_concept_ = parent;
      current_class_.reset();
      return ack(parent + " is composed of " + name + ".");
    }
    const auto added = store_->mutate([&](KnowledgeBase& w) { return w.add_class(parent, n.name); });
    current_concept_ = parent;
    current_class_ = added.name;
    return ack(added.created ? "New class " + added.name + " of " + parent + "."
                             : added.name + " exists in " + parent + ": no operation.");
  }

  if (const auto* c = kb->find_concept(n.name)) {
    current_concept_ = c->name;
    current_class_.reset();
    return ack("I know " + c->name + ".");
  }
  if (current_concept_) {
    const Concept& current = kb->concept_named(*current_concept_);
    for (const auto& [cls, cc] : current.classes) {
      if (same_name(cls, n.name)) {
        current_class_ = cls;
        return ack(cls + " exists in " + current.name + ": no operation.");
      }
    }
  }
  if (const auto* owner = kb->concept_of_class(n.name)) {
    current_concept_ = owner->name;
    for (const auto& [cls, cc] : owner->classes) {
      if (same_name(cls, n.name)) current_class_ = cls;
    }
    return ack(*current_class_ + " exists in " + owner->name + ": no operation.");
  }

  MachineUtterance q;
  q.kind = UtteranceKind::clarification;
  q.proposal = ProposedMutation{n.name, current_concept_};
  if (current_concept_) {
    q.text = "Your " + lower(n.name) + " ? (new class of " + *current_concept_ + "? yes/no)";
  } else {
    q.text = n.name + " ? (new concept? yes/no)";
  }
  pending_ = q.proposal;
  return q;
}

MachineUtterance Session::confirm(const Confirm& c) {
  if (!pending_) throw Error(ErrorCode::ProtocolError, "there is no pending question");
  const ProposedMutation p = *pending_;
  if (p.concept_name && c.yes) {
    const auto added = store_->mutate([&](KnowledgeBase& w) { return w.add_class(*p.concept_name, p.noun); });
    pending_.reset();
    current_class_ = added.name;
    return ack("New class " + added.name + " of " + *p.concept_name + ".");
  }
  if (!p.concept_name && !c.yes) {
    pending_.reset();
    return ack("Nothing created.");
  }
  const auto name = store_->mutate([&](KnowledgeBase& w) { return w.add_concept(p.noun); });
  pending_.reset();
  current_concept_ = name;
  current_class_.reset();
  return ack("New concept: " + name + ".");
}

MachineUtterance Session::adjective(const DeclareAdjective& a) {
  auto kb = store_->snapshot();
  if (const auto* existing = kb->find_feature(a.name)) {
    std::vector<std::string> fresh;
    for (const auto& v : a.values) {
      if (!existing->value_index(v)) fresh.push_back(v);
    }
    if (fresh.empty()) throw Error(ErrorCode::DuplicateFeature, "feature " + existing->name + " already exists");
    const std::string name = existing->name;
    store_->mutate([&](KnowledgeBase& w) {
      for (const auto& v : fresh) w.extend_feature_domain(name, v);
    });
    return ack("Feature " + name + " now also takes " + join(fresh) + ".");
  }
  FeatureDef def;
  def.name = a.name;
  def.values = a.values;
  const std::string owner = current_concept_.value_or("");
  store_->mutate([&](KnowledgeBase& w) { w.add_feature(def, owner); });
  return ack("New feature " + a.name + ": " + join(a.values) + (owner.empty() ? "." : " (of " + owner + ")."));
}

MachineUtterance Session::verb(const DeclareVerb& v) {
  const FrameSpec spec{v.name, v.source, v.target, v.inputs, v.outputs, v.externals};
  store_->mutate([&](KnowledgeBase& w) { w.add_frame(spec); });
  const Frame& fr = store_->snapshot()->frame(v.name);
  MachineUtterance reply;
  reply.kind = UtteranceKind::question_back;
  reply.text = "New frame " + fr.name + " from " + fr.source + " to " + fr.target + ". Which rules link " +
               join(fr.inputs) + " to " + join(fr.outputs) + "?";
  return reply;
}

MachineUtterance Session::rule(const DeclareRule& r) {
  const auto before = store_->snapshot()->revision();
  const auto index = store_->mutate([&](KnowledgeBase& w) { return w.add_rule(r.frame, r.rule); });
  auto kb = store_->snapshot();
  const Frame& fr = kb->frame(r.frame);
  const std::string text = to_string(fr.rules.at(index));
  if (kb->revision() == before) return ack("Already known: " + text + ".");
  return ack("Rule added to " + fr.name + ": " + text + ".");
}

MachineUtterance Session::fact(const StateFact& f) {
  auto kb = store_->snapshot();
  const Binding b = resolve_binding(*kb, f.feature, f.value);
  const FeatureDef& def = kb->feature(b.feature);
  const auto& classifier = kb->classifier_for(def.name);
  const bool binnable = !def.is_numeric() || def.binnable();

  std::optional<std::string> label;
  bool observe = false;
  if (binnable && classifier.mode() == ClassifierMode::unsupervised) {
    observe = true;
  } else if (binnable && current_class_ && current_concept_ && def.owner == *current_concept_) {
    observe = true;
    label = current_class_;
  }
  if (observe) {
    store_->mutate([&](KnowledgeBase& w) {
      if (label) {
        w.observe(def.name, b.value, std::string_view(*label));
      } else {
        w.observe(def.name, b.value);
      }
    });
  }
  facts_.set(b.feature, b.value, current_concept_.value_or(""));
  return ack("Noted " + to_string(b) + (label ? " for " + *label : "") + ".");
}

MachineUtterance Session::ask(const Ask& a) {
  auto kb = store_->snapshot();
  FactSet facts = facts_;
  for (const auto& b : a.given) {
    const Binding r = resolve_binding(*kb, b.feature, b.value);
    facts.set(r.feature, r.value);
  }
  const std::string goal = kb->feature(a.goal).name;
  MachineUtterance reply;
  reply.kind = UtteranceKind::answer;
  reply.answer = query(*kb, facts, goal);
  reply.text = describe(*reply.answer, goal);
  return reply;
}

ReplayResult replay_script(const KnowledgeBase& kb, std::string_view script, const ReplayOptions& options) {
  const auto lines = parse_script(script);
  auto store = std::make_shared<KbStore>(kb);
  Session session("replay", store, options.current_concept);
  ReplayResult result;
  for (const auto& line : lines) {
    if (line.snapshot) {
      result.snapshots.push_back({*line.snapshot, *store->snapshot()});
      continue;
    }
    try {
      session.apply(line.command);
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line.line) + ": " + e.detail());
    }
    const auto revision = store->snapshot()->revision();
    result.transcript.push_back({Speaker::trainer, line.text, revision});
  }
  result.kb = *store->snapshot();
  return result;
}

}  // namespace col
