#include "fixtures.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <sys/wait.h>

namespace fixtures {

std::string data_file(const std::string& name) { return std::string(COL_DATA_DIR) + "/" + name; }

col::KnowledgeBase case_study_seed() { return col::new_kb(col::read_text_file(data_file("case_study_seed.json"))); }

const col::ReplayResult& case_study_replay() {
  static const col::ReplayResult result =
      col::replay_script(case_study_seed(), col::read_text_file(data_file("case_study.col")));
  return result;
}

const col::KnowledgeBase& case_study() { return case_study_replay().kb; }

const col::KnowledgeBase& snapshot(const std::string& name) {
  for (const auto& s : case_study_replay().snapshots) {
    if (s.name == name) return s.kb;
  }
  throw std::runtime_error("no snapshot " + name);
}

col::KnowledgeBase evaporation() { return col::new_kb(col::read_text_file(data_file("evaporation_seed.json"))); }

col::FactSet facts(std::initializer_list<std::pair<std::string, col::Value>> list) {
  col::FactSet out;
  for (const auto& [k, v] : list) out.set(k, v);
  return out;
}

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  path_ = std::filesystem::temp_directory_path() / ("col-test-" + std::to_string(rng()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

int run_cli(const std::string& args, std::string* output) {
  const std::string cmd = std::string("\"") + COL_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::string out;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  if (output) *output = out;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RandomFrame random_reciprocal_frame(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomFrame rf;
  rf.kb.add_concept("Source");
  rf.kb.add_concept("Target");

  auto make_features = [&](const std::string& prefix, int count, std::vector<std::string>& names,
                           std::vector<std::size_t>& sizes) {
    for (int i = 0; i < count; ++i) {
      col::FeatureDef def;
      def.name = prefix + std::to_string(i);
      const int n = pick(1, 4);
      for (int v = 0; v < n; ++v) def.values.push_back(prefix + std::to_string(i) + "v" + std::to_string(v));
      rf.kb.add_feature(def);
      names.push_back(def.name);
      sizes.push_back(static_cast<std::size_t>(n));
    }
  };
  std::vector<std::size_t> in_sizes, out_sizes;
  make_features("i", pick(1, 3), rf.inputs, in_sizes);
  make_features("o", pick(1, 2), rf.outputs, out_sizes);
  rf.frame = "F";
  rf.kb.add_frame({rf.frame, "Source", "Target", rf.inputs, rf.outputs, {}});

  auto product = [](const std::vector<std::size_t>& sizes) {
    std::size_t p = 1;
    for (auto s : sizes) p *= s;
    return p;
  };
  auto decode = [](std::size_t index, const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> digits;
    for (auto s : sizes) {
      digits.push_back(index % s);
      index /= s;
    }
    return digits;
  };
  auto clause = [&](const std::vector<std::string>& names, const std::vector<std::size_t>& digits) {
    std::vector<col::Binding> out;
    for (std::size_t k = 0; k < names.size(); ++k) {
      out.push_back({names[k], names[k] + "v" + std::to_string(digits[k])});
    }
    return out;
  };

  // Injective partial map from input assignments to output assignments.
  const std::size_t n_in = product(in_sizes), n_out = product(out_sizes);
  std::vector<std::size_t> targets(n_out);
  for (std::size_t k = 0; k < n_out; ++k) targets[k] = k;
  std::shuffle(targets.begin(), targets.end(), rng);
  std::vector<std::size_t> sources(n_in);
  for (std::size_t k = 0; k < n_in; ++k) sources[k] = k;
  std::shuffle(sources.begin(), sources.end(), rng);
  const std::size_t rules = std::min(n_in, n_out);
  for (std::size_t k = 0; k < rules; ++k) {
    col::CategoricalRule r;
    r.antecedent = clause(rf.inputs, decode(sources[k], in_sizes));
    r.consequent = clause(rf.outputs, decode(targets[k], out_sizes));
    r.reciprocal = true;
    rf.kb.add_rule(rf.frame, col::Rule{r});
  }
  return rf;
}

}  // namespace fixtures
