#include "col/feature.hpp"

#include <algorithm>
#include <cmath>

#include "col/error.hpp"

namespace col {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::ordinal: return "ordinal";
    case FeatureKind::numeric: return "numeric";
  }
  return "categorical";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view text) {
  if (text == "categorical") return FeatureKind::categorical;
  if (text == "ordinal") return FeatureKind::ordinal;
  if (text == "numeric") return FeatureKind::numeric;
  return std::nullopt;
}

std::optional<std::size_t> FeatureDef::value_index(std::string_view label) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) return i;
  }
  const std::string key = name_key(label);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (name_key(values[i]) == key) return i;
  }
  return std::nullopt;
}

std::optional<std::string> FeatureDef::find_value(std::string_view label) const {
  if (auto i = value_index(label)) return values[*i];
  return std::nullopt;
}

std::vector<std::string> FeatureDef::bin_labels() const {
  if (!is_numeric()) return values;
  std::vector<std::string> labels;
  labels.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) labels.push_back("bin" + std::to_string(i));
  return labels;
}

std::string FeatureDef::bin_for(const Value& v) const {
  if (!is_numeric()) {
    if (!is_label(v)) throw Error(ErrorCode::UnknownValue, "feature " + name + " expects a label");
    auto label = find_value(std::get<std::string>(v));
    if (!label) {
      throw Error(ErrorCode::UnknownValue,
                  "value " + std::get<std::string>(v) + " is not in the domain of " + name);
    }
    return *label;
  }
  if (!is_number(v)) throw Error(ErrorCode::UnknownValue, "feature " + name + " expects a number");
  if (!binnable()) {
    throw Error(ErrorCode::UnknownValue, "numeric feature " + name + " has no bounds to bin against");
  }
  const double x = std::get<double>(v);
  if (!(x >= *min && x <= *max)) {
    throw Error(ErrorCode::UnknownValue, "value " + to_string(v) + " outside the range of " + name);
  }
  const double width = (*max - *min) / static_cast<double>(bins);
  auto index = static_cast<std::size_t>(std::floor((x - *min) / width));
  index = std::min(index, bins - 1);
  return "bin" + std::to_string(index);
}

}  // namespace col
