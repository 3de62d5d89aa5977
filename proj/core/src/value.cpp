#include "col/value.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace col {

std::string name_key(std::string_view name) {
  std::string key;
  key.reserve(name.size());
  for (unsigned char c : name) {
    if (std::isspace(c) || c == '_' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(c)));
  }
  return key;
}

std::string to_string(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream out;
  out.precision(17);
  out << std::get<double>(v);
  return out.str();
}

bool value_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (is_label(a)) return std::get<std::string>(a) == std::get<std::string>(b);
  const double x = std::get<double>(a);
  const double y = std::get<double>(b);
  if (x == y) return true;
  return std::fabs(x - y) <= 1e-9 * std::max(std::fabs(x), std::fabs(y));
}

std::string to_string(const Binding& b) { return b.feature + "=" + to_string(b.value); }

}  // namespace col
