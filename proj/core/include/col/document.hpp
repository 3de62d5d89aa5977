#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "col/error.hpp"
#include "col/knowledge_base.hpp"

namespace col {

inline constexpr std::string_view kDocumentVersion = "col/1";

// A document that parsed but describes an inconsistent knowledge base.
class InvalidKbError : public Error {
 public:
  explicit InvalidKbError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Canonical JSON text: sorted keys, elements ordered by name, two-space
// indent, trailing newline. Equal knowledge bases give identical bytes.
std::string to_document(const KnowledgeBase& kb);

// Throws FormatError (message starts with the JSON path of the offending
// element) or InvalidKbError when the decoded KB fails validation.
KnowledgeBase from_document(std::string_view text);

// IoError when the destination cannot be written or the source read.
void save_kb(const KnowledgeBase& kb, const std::filesystem::path& destination);
KnowledgeBase load_kb(const std::filesystem::path& source);

// Builds a KB from a seed fragment through the ordinary mutation operations,
// then resets the revision to 0. A seed uses the document layout with every
// section optional; classifier counts are not read. Throws SeedError.
KnowledgeBase new_kb(std::optional<std::string_view> seed = std::nullopt);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace col
