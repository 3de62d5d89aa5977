#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace col {

// Immutable arithmetic tree used by quantitative rules. Copies share nodes.
class Expression {
 public:
  enum class Kind { number, constant, variable, binary };

  static Expression number(double value);
  // A named physical constant, resolved to its value when the rule is bound.
  static Expression constant(std::string name, double value);
  static Expression variable(std::string name);
  // op is one of + - * /
  static Expression binary(char op, Expression lhs, Expression rhs);

  Kind kind() const;
  double value() const;             // number, constant
  const std::string& name() const;  // constant, variable
  char op() const;                  // binary
  const Expression& lhs() const;
  const Expression& rhs() const;

  // Variable names referenced by the tree.
  std::set<std::string> variables() const;
  // Divisor subtrees of every '/' node, in pre-order.
  std::vector<Expression> divisors() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Infix rendering with the minimum parentheses needed to reparse to an equal
// tree. Numbers use the shortest round-trip representation.
std::string to_string(const Expression& e);

// Shortest decimal text that reads back as exactly the same double.
std::string format_number(double value);

}  // namespace col
