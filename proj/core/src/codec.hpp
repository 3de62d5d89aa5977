#pragma once

// JSON encoding shared by the document, graph and service layers. Kept out of
// the public headers so clients do not inherit the json dependency.

#include <string>

#include <json.hpp>

#include "col/engine.hpp"
#include "col/error.hpp"
#include "col/knowledge_base.hpp"

namespace col::codec {

using json = nlohmann::json;

// Read-only cursor that remembers its JSON path for FormatError messages.
class Reader {
 public:
  Reader(const json& j, std::string path, ErrorCode code = ErrorCode::FormatError)
      : j_(&j), path_(std::move(path)), code_(code) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }
  Reader at(const char* key) const;
  Reader at(std::size_t index) const;
  std::size_t size() const;  // arrays only
  std::vector<std::string> keys() const;  // objects only

  std::string str() const;
  double num() const;
  std::uint64_t u64() const;
  bool boolean() const;
  std::vector<std::string> strings() const;
  Value value() const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const json* j_;
  std::string path_;
  ErrorCode code_;
};

json to_json(const Value& v);
json to_json(const Binding& b);
json to_json(const Rule& rule);
json to_json(const Step& step);
json to_json(const Derivation& d);
json to_json(const Answer& a);
json to_json(const KbDelta& d);

// Names exactly as written; formulas are parsed but not bound.
Rule rule_from_json(const Reader& r);

// Input/rules/output table of one frame.
json frame_table(const Frame& frame);

}  // namespace col::codec
