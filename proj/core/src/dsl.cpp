#include "col/dsl.hpp"

#include <cctype>
#include <charconv>

namespace col {

namespace {

enum class Tok { ident, string, number, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  SourcePos pos;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"noun", "under", "verb", "from", "to",    "in",  "out",     "ext",
                                       "adj",  "rule",  "fact", "ask",  "given", "yes", "no",      "if",
                                       "nonzero", "and"};
  return k;
}

bool bare_char(unsigned char c, bool first) {
  if (c >= 0x80 || c == '_' || std::isalpha(c)) return true;
  return !first && std::isdigit(c);
}

std::vector<Token> lex(std::string_view text, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto pos = [&](std::size_t at) { return SourcePos{line, at + 1}; };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t start = i;
    if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char ch = text[i++];
        if (ch == '\\' && i < text.size()) {
          value += text[i++];
        } else if (ch == '"') {
          closed = true;
          break;
        } else {
          value += ch;
        }
      }
      if (!closed) throw SyntaxError(pos(start), {"\""}, "unterminated quoted name");
      out.push_back({Tok::string, std::move(value), 0.0, pos(start)});
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      double value = 0.0;
      auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec != std::errc{}) throw SyntaxError(pos(start), {"number"}, "malformed number");
      i = static_cast<std::size_t>(end - text.data());
      out.push_back({Tok::number, std::string(text.substr(start, i - start)), value, pos(start)});
      continue;
    }
    if (bare_char(c, true)) {
      while (i < text.size() && bare_char(static_cast<unsigned char>(text[i]), false)) ++i;
      out.push_back({Tok::ident, std::string(text.substr(start, i - start)), 0.0, pos(start)});
      continue;
    }
    for (std::string_view sym : {"<=>", "->"}) {
      if (text.substr(i, sym.size()) == sym) {
        i += sym.size();
        out.push_back({Tok::symbol, std::string(sym), 0.0, pos(start)});
        break;
      }
    }
    if (i != start) continue;
    if (std::string_view(":,()=&+-*/").find(static_cast<char>(c)) != std::string_view::npos) {
      ++i;
      out.push_back({Tok::symbol, std::string(1, static_cast<char>(c)), 0.0, pos(start)});
      continue;
    }
    throw SyntaxError(pos(start), {}, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Tok::end, "", 0.0, pos(text.size())});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of line";
    case Tok::string: return "\"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t line) : tokens_(lex(text, line)) {}

  Command statement() {
    Command cmd;
    cmd.pos = peek().pos;
    if (at_end()) return cmd;
    if (is_keyword("noun")) {
      cmd.body = noun();
    } else if (is_keyword("verb")) {
      cmd.body = verb();
    } else if (is_keyword("adj")) {
      cmd.body = adjective();
    } else if (is_keyword("rule")) {
      cmd.body = rule();
    } else if (is_keyword("fact")) {
      cmd.body = fact();
    } else if (is_keyword("ask")) {
      cmd.body = ask();
    } else if (is_keyword("yes") || is_keyword("no")) {
      cmd.body = Confirm{next().text == "yes"};
    } else {
      fail({"noun", "verb", "adj", "rule", "fact", "ask", "yes", "no"});
    }
    expect_end();
    return cmd;
  }

  Expression expression_only() {
    Expression e = expression();
    expect_end();
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is_keyword(std::string_view k) const { return peek().kind == Tok::ident && peek().text == k; }
  bool is_symbol(std::string_view s) const { return peek().kind == Tok::symbol && peek().text == s; }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw SyntaxError(peek().pos, expected, "expected " + list + " but found " + describe(peek()));
  }

  void keyword(std::string_view k) {
    if (!is_keyword(k)) fail({std::string(k)});
    next();
  }
  void symbol(std::string_view s) {
    if (!is_symbol(s)) fail({std::string(s)});
    next();
  }
  void expect_end() {
    if (!at_end()) fail({"end of line"});
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind == Tok::string || (t.kind == Tok::ident && !keywords().contains(t.text))) return next().text;
    fail({"identifier"});
  }

  std::vector<std::string> idlist() {
    std::vector<std::string> out{ident()};
    while (is_symbol(",")) {
      next();
      out.push_back(ident());
    }
    return out;
  }

  std::vector<std::string> parenthesized(bool allow_empty = false) {
    symbol("(");
    if (allow_empty && is_symbol(")")) {
      next();
      return {};
    }
    auto out = idlist();
    symbol(")");
    return out;
  }

  DeclareNoun noun() {
    keyword("noun");
    DeclareNoun n{ident(), std::nullopt};
    if (is_keyword("under")) {
      next();
      n.under = ident();
    }
    return n;
  }

  DeclareVerb verb() {
    keyword("verb");
    DeclareVerb v;
    v.name = ident();
    keyword("from");
    v.source = ident();
    keyword("to");
    v.target = ident();
    keyword("in");
    v.inputs = parenthesized();
    keyword("out");
    v.outputs = parenthesized();
    if (is_keyword("ext")) {
      next();
      v.externals = parenthesized();
    }
    return v;
  }

  DeclareAdjective adjective() {
    keyword("adj");
    DeclareAdjective a;
    a.name = ident();
    symbol(":");
    a.values = idlist();
    return a;
  }

  Value value() {
    if (is_symbol("-")) {
      next();
      if (peek().kind != Tok::number) fail({"number"});
      return -next().number;
    }
    if (peek().kind == Tok::number) return next().number;
    return ident();
  }

  Binding binding() {
    Binding b;
    b.feature = ident();
    symbol("=");
    b.value = value();
    return b;
  }

  std::vector<Binding> conjunction() {
    std::vector<Binding> out{binding()};
    while (is_symbol("&") || is_keyword("and")) {
      next();
      out.push_back(binding());
    }
    return out;
  }

  std::vector<Guard> guardlist() {
    std::vector<Guard> out;
    do {
      if (!out.empty()) next();
      if (is_keyword("given")) {
        next();
        for (auto& f : parenthesized()) out.emplace_back(GivenGuard{std::move(f)});
      } else if (is_keyword("nonzero")) {
        next();
        symbol("(");
        out.emplace_back(NonzeroGuard{expression()});
        symbol(")");
      } else {
        fail({"given", "nonzero"});
      }
    } while (is_symbol(","));
    return out;
  }

  DeclareRule rule() {
    keyword("rule");
    DeclareRule r{ident(), Rule{}};
    symbol(":");
    if (is_keyword("given")) {
      next();
      QuantitativeRule q{{}, {}, Expression::number(0)};
      for (auto& f : parenthesized(true)) q.guards.emplace_back(GivenGuard{std::move(f)});
      if (is_symbol("<=>")) {
        throw SyntaxError(peek().pos, {"->"}, "formula rules are one-sided; use '->'");
      }
      symbol("->");
      q.target = ident();
      symbol("=");
      q.formula = expression();
      if (is_keyword("if")) {
        next();
        for (auto& g : guardlist()) q.guards.push_back(std::move(g));
      }
      r.rule.body = std::move(q);
      return r;
    }
    CategoricalRule c;
    c.antecedent = conjunction();
    if (is_symbol("<=>")) {
      c.reciprocal = true;
    } else if (is_symbol("->")) {
      c.reciprocal = false;
    } else {
      fail({"<=>", "->"});
    }
    next();
    c.consequent = conjunction();
    if (is_keyword("if")) {
      throw SyntaxError(peek().pos, {"end of line"}, "guards apply to formula rules only");
    }
    r.rule.body = std::move(c);
    return r;
  }

  StateFact fact() {
    keyword("fact");
    auto b = binding();
    return StateFact{std::move(b.feature), std::move(b.value)};
  }

  Ask ask() {
    keyword("ask");
    Ask a{ident(), {}};
    if (is_keyword("given")) {
      next();
      a.given.push_back(binding());
      while (is_symbol(",")) {
        next();
        a.given.push_back(binding());
      }
    }
    return a;
  }

  // expr := term {("+"|"-") term}; term := factor {("*"|"/") factor};
  // factor := number | name | "(" expr ")" | "-" factor
  Expression expression() {
    Expression e = term();
    while (is_symbol("+") || is_symbol("-")) {
      const char op = next().text[0];
      e = Expression::binary(op, e, term());
    }
    return e;
  }

  Expression term() {
    Expression e = factor();
    while (is_symbol("*") || is_symbol("/")) {
      const char op = next().text[0];
      e = Expression::binary(op, e, factor());
    }
    return e;
  }

  Expression factor() {
    const Token& t = peek();
    if (t.kind == Tok::number) return Expression::number(next().number);
    if (t.kind == Tok::string || (t.kind == Tok::ident && t.text != "if")) return Expression::variable(next().text);
    if (is_symbol("(")) {
      next();
      Expression e = expression();
      symbol(")");
      return e;
    }
    if (is_symbol("-")) {
      next();
      Expression inner = factor();
      if (inner.kind() == Expression::Kind::number) return Expression::number(-inner.value());
      return Expression::binary('-', Expression::number(0), inner);
    }
    fail({"number", "identifier", "(", "-"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string join_idents(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + quote_ident(n);
  return out;
}

std::string render_value(const Value& v) {
  if (is_number(v)) return format_number(std::get<double>(v));
  return quote_ident(std::get<std::string>(v));
}

std::string render_bindings(const std::vector<Binding>& bindings, std::string_view sep) {
  std::string out;
  for (const auto& b : bindings) {
    if (!out.empty()) out += sep;
    out += quote_ident(b.feature) + " = " + render_value(b.value);
  }
  return out;
}

struct Printer {
  std::string operator()(const Nothing&) const { return ""; }
  std::string operator()(const DeclareNoun& n) const {
    return "noun " + quote_ident(n.name) + (n.under ? " under " + quote_ident(*n.under) : "");
  }
  std::string operator()(const DeclareVerb& v) const {
    std::string out = "verb " + quote_ident(v.name) + " from " + quote_ident(v.source) + " to " +
                      quote_ident(v.target) + " in(" + join_idents(v.inputs) + ") out(" + join_idents(v.outputs) + ")";
    if (!v.externals.empty()) out += " ext(" + join_idents(v.externals) + ")";
    return out;
  }
  std::string operator()(const DeclareAdjective& a) const {
    return "adj " + quote_ident(a.name) + " : " + join_idents(a.values);
  }
  std::string operator()(const DeclareRule& r) const {
    std::string out = "rule " + quote_ident(r.frame) + " : ";
    if (r.rule.is_categorical()) {
      const auto& c = r.rule.categorical();
      return out + render_bindings(c.antecedent, " & ") + (c.reciprocal ? " <=> " : " -> ") +
             render_bindings(c.consequent, " & ");
    }
    const auto& q = r.rule.quantitative();
    std::size_t lead = 0;
    while (lead < q.guards.size() && std::holds_alternative<GivenGuard>(q.guards[lead])) ++lead;
    std::vector<std::string> given;
    for (std::size_t i = 0; i < lead; ++i) given.push_back(std::get<GivenGuard>(q.guards[i]).feature);
    out += "given(" + join_idents(given) + ") -> " + quote_ident(q.target) + " = " + to_string(q.formula);
    std::string tail;
    for (std::size_t i = lead; i < q.guards.size(); ++i) {
      if (!tail.empty()) tail += ", ";
      if (const auto* g = std::get_if<GivenGuard>(&q.guards[i])) {
        tail += "given(" + quote_ident(g->feature) + ")";
      } else {
        tail += "nonzero(" + to_string(std::get<NonzeroGuard>(q.guards[i]).expr) + ")";
      }
    }
    if (!tail.empty()) out += " if " + tail;
    return out;
  }
  std::string operator()(const StateFact& f) const {
    return "fact " + quote_ident(f.feature) + " = " + render_value(f.value);
  }
  std::string operator()(const Ask& a) const {
    std::string out = "ask " + quote_ident(a.goal);
    if (!a.given.empty()) out += " given " + render_bindings(a.given, ", ");
    return out;
  }
  std::string operator()(const Confirm& c) const { return c.yes ? "yes" : "no"; }
};

}  // namespace

Command parse_statement(std::string_view text, std::size_t line) { return Parser(text, line).statement(); }

Expression parse_expression(std::string_view text) { return Parser(text, 1).expression_only(); }

std::string quote_ident(std::string_view name) {
  bool bare = !name.empty() && bare_char(static_cast<unsigned char>(name[0]), true) &&
              !keywords().contains(std::string(name));
  for (unsigned char c : name) bare = bare && bare_char(c, false);
  if (bare) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string to_string(const Command& cmd) { return std::visit(Printer{}, cmd.body); }

std::vector<ScriptLine> parse_script(std::string_view text) {
  std::vector<ScriptLine> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++line;
    ScriptLine sl;
    sl.line = line;
    sl.text = std::string(raw);
    std::size_t first = raw.find_first_not_of(" \t");
    if (first != std::string_view::npos && raw.substr(first, 9) == "@snapshot") {
      auto rest = raw.substr(first + 9);
      const auto b = rest.find_first_not_of(" \t");
      const auto e = rest.find_last_not_of(" \t");
      if (b == std::string_view::npos || (rest.front() != ' ' && rest.front() != '\t')) {
        throw SyntaxError(SourcePos{line, first + 10}, {"snapshot name"}, "snapshot marker needs a name");
      }
      sl.snapshot = std::string(rest.substr(b, e - b + 1));
    } else {
      sl.command = parse_statement(raw, line);
    }
    if (end == text.size()) {
      if (!(raw.empty() && sl.line > 1 && !sl.snapshot)) out.push_back(std::move(sl));
      break;
    }
    out.push_back(std::move(sl));
    start = end + 1;
  }
  return out;
}

}  // namespace col
