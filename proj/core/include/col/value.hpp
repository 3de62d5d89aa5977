#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace col {

// Lookup key for user-facing names: case-insensitive, ignoring blanks,
// underscores and hyphens, so "Pain at eyes" and "PainAtEyes" coincide.
std::string name_key(std::string_view name);

inline bool same_name(std::string_view a, std::string_view b) {
  return a == b || name_key(a) == name_key(b);
}

// A feature value: a domain label for categorical/ordinal features, a number
// for numeric ones.
using Value = std::variant<std::string, double>;

inline bool is_label(const Value& v) { return std::holds_alternative<std::string>(v); }
inline bool is_number(const Value& v) { return std::holds_alternative<double>(v); }

std::string to_string(const Value& v);

// Labels compare exactly; numbers compare with a relative tolerance of 1e-9.
bool value_equal(const Value& a, const Value& b);

struct Binding {
  std::string feature;
  Value value;

  friend bool operator==(const Binding&, const Binding&) = default;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

std::string to_string(const Binding& b);

}  // namespace col
