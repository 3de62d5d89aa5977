#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "col/value.hpp"

namespace col {

enum class FeatureKind { categorical, ordinal, numeric };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view text);

inline constexpr std::size_t kDefaultNumericBins = 16;

struct FeatureDef {
  std::string name;
  FeatureKind kind = FeatureKind::categorical;
  // Ordered labels for categorical/ordinal features; list position is the
  // order of an ordinal domain.
  std::vector<std::string> values;
  // Numeric features only.
  std::string unit;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t bins = kDefaultNumericBins;
  // Owning concept, empty for frame-scoped features.
  std::string owner;
  // Id of the one classifier bound to this feature.
  std::string classifier;

  bool is_numeric() const { return kind == FeatureKind::numeric; }
  bool binnable() const { return is_numeric() && min && max && *max > *min; }

  // Canonical domain label matching `label` (exact, then by name key).
  std::optional<std::string> find_value(std::string_view label) const;
  std::optional<std::size_t> value_index(std::string_view label) const;

  // Histogram axis for the bound classifier.
  std::vector<std::string> bin_labels() const;
  // Maps a value onto the classifier axis; throws UnknownValue when the value
  // is outside the domain or the numeric feature has no bounds.
  std::string bin_for(const Value& v) const;

  friend bool operator==(const FeatureDef&, const FeatureDef&) = default;
};

}  // namespace col
