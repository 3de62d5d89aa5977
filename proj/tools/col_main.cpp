// col: command-line front end for a knowledge base file.
//
//   col [--kb kb.json] init [--seed seed.json]
//   col teach script.col [--concept Humans] [--snapshots dir]
//   col teach --interactive
//   col query --fact "Pain at eyes=Yes" --goal "Quality vision"
//   col export-dot
//   col validate
//   col serve --bind 127.0.0.1:8080
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "col/document.hpp"
#include "col/engine.hpp"
#include "col/graph.hpp"
#include "col/service.hpp"
#include "col/session.hpp"

namespace fs = std::filesystem;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int init(const fs::path& kb_path, const std::string& seed, bool force) {
  if (fs::exists(kb_path) && !force) {
    throw col::Error(col::ErrorCode::IoError, kb_path.string() + " exists (use --force to overwrite)");
  }
  const auto kb = seed.empty() ? col::new_kb() : col::new_kb(col::read_text_file(seed));
  col::save_kb(kb, kb_path);
  std::cout << "initialized " << kb_path.string() << ": " << kb.concept_count() << " concepts, "
            << kb.feature_count() << " features\n";
  return 0;
}

int teach_script(const fs::path& kb_path, const std::string& script, const std::string& concept_name,
                 const std::string& snapshots) {
  col::ReplayOptions options;
  if (!concept_name.empty()) options.current_concept = concept_name;
  const auto result = col::replay_script(col::load_kb(kb_path), col::read_text_file(script), options);
  if (!snapshots.empty()) {
    fs::create_directories(snapshots);
    for (const auto& s : result.snapshots) col::save_kb(s.kb, fs::path(snapshots) / (s.name + ".json"));
  }
  col::save_kb(result.kb, kb_path);
  std::cout << result.transcript.size() << " lines, revision " << result.kb.revision() << "\n";
  return 0;
}

int teach_interactive(const fs::path& kb_path, const std::string& concept_name) {
  auto store = std::make_shared<col::KbStore>(col::load_kb(kb_path));
  col::Session session("cli", store, concept_name.empty() ? std::nullopt : std::optional(concept_name));
  std::string line;
  std::size_t n = 0;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    ++n;
    try {
      std::cout << session.step(line, n).text << "\n";
    } catch (const col::Error& e) {
      std::cout << e.what() << "\n";
    }
  }
  col::save_kb(*store->snapshot(), kb_path);
  std::cout << "\nsaved revision " << store->snapshot()->revision() << "\n";
  return 0;
}

int query(const fs::path& kb_path, const std::vector<std::string>& facts, const std::string& goal, bool as_json) {
  const auto kb = col::load_kb(kb_path);
  col::FactSet given;
  for (const auto& f : facts) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw Usage("--fact expects feature=value, got \"" + f + "\"");
    const auto b = col::resolve_binding(kb, f.substr(0, eq), f.substr(eq + 1));
    given.set(b.feature, b.value);
  }
  const std::string name = kb.feature(goal).name;
  const auto answer = col::query(kb, given, name);
  if (as_json) {
    std::cout << col::answer_json(answer, name) << "\n";
    return 0;
  }
  std::cout << col::describe(answer, name) << "\n";
  if (!answer.derivations.empty()) {
    for (const auto& s : answer.derivations.front().steps) {
      std::cout << "  " << s.frame << (s.direction == col::Direction::forward ? " forward: " : " backward: ");
      for (const auto& b : s.consumed) std::cout << col::to_string(b) << " ";
      std::cout << "=>";
      for (const auto& b : s.produced) std::cout << " " << col::to_string(b);
      std::cout << "\n";
    }
  }
  return 0;
}

int validate(const fs::path& kb_path) {
  try {
    const auto kb = col::load_kb(kb_path);
    std::cout << "ok: revision " << kb.revision() << ", p=" << kb.concept_count() << ", j=" << kb.feature_count()
              << ", l=" << kb.classifier_count() << "\n";
    return 0;
  } catch (const col::InvalidKbError& e) {
    for (const auto& v : e.violations()) std::cout << v.element << ": " << v.invariant << " (" << v.detail << ")\n";
    return 1;
  }
}

int serve(const fs::path& kb_path, const std::string& bind, const std::string& concept_name) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw Usage("--bind expects host:port");
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw Usage("bad port in --bind " + bind);
  }
  auto store = std::make_shared<col::KbStore>(col::load_kb(kb_path));
  col::Service service(store, kb_path, concept_name.empty() ? std::nullopt : std::optional(concept_name));
  const int bound = service.bind(bind.substr(0, colon), port);
  std::cout << "listening on " << bind.substr(0, colon) << ":" << bound << std::endl;
  service.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept knowledge base tool"};
  app.require_subcommand(1);
  std::string kb_path = "kb.json";
  app.add_option("--kb", kb_path, "Knowledge base document")->capture_default_str();

  auto* init_cmd = app.add_subcommand("init", "Create a knowledge base, optionally from a seed");
  std::string seed;
  bool force = false;
  init_cmd->add_option("--seed", seed, "Seed fragment (JSON)")->check(CLI::ExistingFile);
  init_cmd->add_flag("--force", force, "Overwrite an existing file");

  auto* teach_cmd = app.add_subcommand("teach", "Replay a teaching script or read statements from stdin");
  std::string script, concept_name, snapshots;
  bool interactive = false;
  auto* script_opt = teach_cmd->add_option("script", script, "Teaching script")->check(CLI::ExistingFile);
  auto* interactive_opt = teach_cmd->add_flag("--interactive", interactive, "Read statements from stdin");
  script_opt->excludes(interactive_opt);
  teach_cmd->add_option("--concept", concept_name, "Concept in context at the start");
  teach_cmd->add_option("--snapshots", snapshots, "Directory for @snapshot documents");

  auto* query_cmd = app.add_subcommand("query", "Ask for a feature value given facts");
  std::vector<std::string> facts;
  std::string goal;
  bool as_json = false;
  query_cmd->add_option("--fact", facts, "feature=value (repeatable)");
  query_cmd->add_option("--goal", goal, "Feature to deduce")->required();
  query_cmd->add_flag("--json", as_json, "Print the answer as JSON");

  auto* dot_cmd = app.add_subcommand("export-dot", "Print the concept graph in DOT format");
  auto* validate_cmd = app.add_subcommand("validate", "Check every knowledge base invariant");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  std::string bind = "127.0.0.1:8080";
  serve_cmd->add_option("--bind", bind, "host:port")->capture_default_str();
  serve_cmd->add_option("--concept", concept_name, "Concept in context for new sessions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*init_cmd) return init(kb_path, seed, force);
    if (*teach_cmd) {
      if (interactive) return teach_interactive(kb_path, concept_name);
      if (script.empty()) throw Usage("teach needs a script or --interactive");
      return teach_script(kb_path, script, concept_name, snapshots);
    }
    if (*query_cmd) return query(kb_path, facts, goal, as_json);
    if (*dot_cmd) {
      std::cout << col::export_dot(col::load_kb(kb_path));
      return 0;
    }
    if (*validate_cmd) return validate(kb_path);
    if (*serve_cmd) return serve(kb_path, bind, concept_name);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const col::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "IoError: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
