#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "col/document.hpp"
#include "col/engine.hpp"
#include "col/knowledge_base.hpp"
#include "col/session.hpp"

namespace fixtures {

std::string data_file(const std::string& name);

col::KnowledgeBase case_study_seed();
const col::ReplayResult& case_study_replay();
const col::KnowledgeBase& case_study();
const col::KnowledgeBase& snapshot(const std::string& name);
col::KnowledgeBase evaporation();

col::FactSet facts(std::initializer_list<std::pair<std::string, col::Value>> list);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Runs the col CLI with the given argument string; returns its exit status.
int run_cli(const std::string& args, std::string* output = nullptr);

// Frame with all-reciprocal rules over small categorical domains. Each rule
// maps one complete input assignment to one complete output assignment, and
// the mapping is injective, so the rules pass validation.
struct RandomFrame {
  col::KnowledgeBase kb;
  std::string frame;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};
RandomFrame random_reciprocal_frame(std::mt19937& rng);

}  // namespace fixtures
