#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "col/error.hpp"
#include "col/expression.hpp"
#include "col/rule.hpp"
#include "col/value.hpp"

// Controlled teaching language, one statement per line:
//
//   statement := noun | verb | adj | rule | fact | ask | confirm ;
//   noun   := "noun" ident ["under" ident] ;
//   verb   := "verb" ident "from" ident "to" ident "in" "(" idlist ")"
//             "out" "(" idlist ")" ["ext" "(" idlist ")"] ;
//   adj    := "adj" ident ":" idlist ;
//   rule   := "rule" ident ":" clause ("<=>" | "->") clause ["if" guardlist] ;
//   fact   := "fact" ident "=" (ident | number) ;
//   ask    := "ask" ident ["given" factlist] ;
//   confirm:= "yes" | "no" ;
//   ident  := bareword | quoted string ;
//
// A categorical clause is `f = v {& f = v}`. A formula rule reads
// `given([a, b]) -> t = <arithmetic> [if nonzero(<arithmetic>), given(c)]`.
namespace col {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, std::set<std::string> expected, const std::string& message)
      : Error(ErrorCode::ParseError, "line " + std::to_string(pos.line) + ", column " +
                                         std::to_string(pos.column) + ": " + message),
        pos_(pos),
        expected_(std::move(expected)) {}

  SourcePos pos() const { return pos_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::set<std::string> expected_;
};

struct DeclareNoun {
  std::string name;
  std::optional<std::string> under;
  friend bool operator==(const DeclareNoun&, const DeclareNoun&) = default;
};

struct DeclareVerb {
  std::string name;
  std::string source;
  std::string target;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> externals;
  friend bool operator==(const DeclareVerb&, const DeclareVerb&) = default;
};

struct DeclareAdjective {
  std::string name;
  std::vector<std::string> values;
  friend bool operator==(const DeclareAdjective&, const DeclareAdjective&) = default;
};

// Names in `rule` are as written; the knowledge base resolves them.
struct DeclareRule {
  std::string frame;
  Rule rule;
  friend bool operator==(const DeclareRule&, const DeclareRule&) = default;
};

struct StateFact {
  std::string feature;
  Value value;
  friend bool operator==(const StateFact&, const StateFact&) = default;
};

struct Ask {
  std::string goal;
  std::vector<Binding> given;
  friend bool operator==(const Ask&, const Ask&) = default;
};

struct Confirm {
  bool yes = true;
  friend bool operator==(const Confirm&, const Confirm&) = default;
};

// Blank or comment-only line.
struct Nothing {
  friend bool operator==(const Nothing&, const Nothing&) = default;
};

using CommandBody =
    std::variant<Nothing, DeclareNoun, DeclareVerb, DeclareAdjective, DeclareRule, StateFact, Ask, Confirm>;

struct Command {
  CommandBody body;
  SourcePos pos;

  // Positions are not part of a command's identity.
  friend bool operator==(const Command& a, const Command& b) { return a.body == b.body; }
};

// Throws SyntaxError.
Command parse_statement(std::string_view text, std::size_t line = 1);
Expression parse_expression(std::string_view text);

// Canonical statement text; parse_statement(to_string(c)) == c.
std::string to_string(const Command& cmd);
std::string quote_ident(std::string_view name);

struct ScriptLine {
  std::size_t line = 0;
  std::string text;
  std::optional<std::string> snapshot;  // set for `@snapshot <name>` markers
  Command command;
};

// Parses a whole script up front; the first bad line throws with its position.
std::vector<ScriptLine> parse_script(std::string_view text);

}  // namespace col
