#include "col/expression.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace col {

struct Expression::Node {
  Kind kind;
  double value = 0.0;
  std::string name;
  char op = 0;
  std::vector<Expression> children;
};

Expression Expression::number(double value) {
  return Expression(std::make_shared<const Node>(Node{Kind::number, value, {}, 0, {}}));
}

Expression Expression::constant(std::string name, double value) {
  return Expression(
      std::make_shared<const Node>(Node{Kind::constant, value, std::move(name), 0, {}}));
}

Expression Expression::variable(std::string name) {
  return Expression(
      std::make_shared<const Node>(Node{Kind::variable, 0.0, std::move(name), 0, {}}));
}

Expression Expression::binary(char op, Expression lhs, Expression rhs) {
  if (op != '+' && op != '-' && op != '*' && op != '/') {
    throw std::invalid_argument(std::string("unsupported operator ") + op);
  }
  return Expression(std::make_shared<const Node>(
      Node{Kind::binary, 0.0, {}, op, {std::move(lhs), std::move(rhs)}}));
}

Expression::Kind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
char Expression::op() const { return node_->op; }

const Expression& Expression::lhs() const { return node_->children.at(0); }
const Expression& Expression::rhs() const { return node_->children.at(1); }

namespace {

void collect_variables(const Expression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expression::Kind::variable: out.insert(e.name()); break;
    case Expression::Kind::binary:
      collect_variables(e.lhs(), out);
      collect_variables(e.rhs(), out);
      break;
    default: break;
  }
}

void collect_divisors(const Expression& e, std::vector<Expression>& out) {
  if (e.kind() != Expression::Kind::binary) return;
  if (e.op() == '/') out.push_back(e.rhs());
  collect_divisors(e.lhs(), out);
  collect_divisors(e.rhs(), out);
}

int precedence(char op) { return (op == '+' || op == '-') ? 1 : 2; }

bool bare_name(const std::string& name) {
  if (name.empty() || name == "if" || std::isdigit(static_cast<unsigned char>(name[0]))) return false;
  for (unsigned char c : name) {
    if (!(std::isalnum(c) || c == '_' || c >= 0x80)) return false;
  }
  return true;
}

std::string quoted(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

void render(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case Expression::Kind::number: out += format_number(e.value()); return;
    case Expression::Kind::constant:
    case Expression::Kind::variable: out += bare_name(e.name()) ? e.name() : quoted(e.name()); return;
    case Expression::Kind::binary: break;
  }
  const int prec = precedence(e.op());
  const auto wrap = [&](const Expression& child, bool right) {
    bool parens = false;
    if (child.kind() == Expression::Kind::binary) {
      const int cp = precedence(child.op());
      parens = cp < prec || (right && cp == prec);
    } else if (child.kind() == Expression::Kind::number && child.value() < 0) {
      parens = true;
    }
    if (parens) out += '(';
    render(child, out);
    if (parens) out += ')';
  };
  wrap(e.lhs(), false);
  out += ' ';
  out += e.op();
  out += ' ';
  wrap(e.rhs(), true);
}

}  // namespace

std::set<std::string> Expression::variables() const {
  std::set<std::string> out;
  collect_variables(*this, out);
  return out;
}

std::vector<Expression> Expression::divisors() const {
  std::vector<Expression> out;
  collect_divisors(*this, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expression::Kind::number: return a.value() == b.value();
    case Expression::Kind::constant:
    case Expression::Kind::variable: return a.name() == b.name();
    case Expression::Kind::binary:
      return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string to_string(const Expression& e) {
  std::string out;
  render(e, out);
  return out;
}

}  // namespace col
