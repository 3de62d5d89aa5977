#include <benchmark/benchmark.h>

#include "col/classifier.hpp"
#include "col/document.hpp"
#include "col/dsl.hpp"
#include "col/engine.hpp"
#include "col/session.hpp"

namespace {

col::KnowledgeBase case_study() {
  static const col::KnowledgeBase kb = [] {
    const auto seed = col::new_kb(col::read_text_file(COL_DATA_DIR "/case_study_seed.json"));
    return col::replay_script(seed, col::read_text_file(COL_DATA_DIR "/case_study.col")).kb;
  }();
  return kb;
}

void BM_Replay(benchmark::State& state) {
  const auto seed = col::new_kb(col::read_text_file(COL_DATA_DIR "/case_study_seed.json"));
  const auto script = col::read_text_file(COL_DATA_DIR "/case_study.col");
  for (auto _ : state) benchmark::DoNotOptimize(col::replay_script(seed, script).kb.revision());
}
BENCHMARK(BM_Replay);

void BM_QueryTwoHops(benchmark::State& state) {
  const auto kb = case_study();
  col::FactSet facts;
  facts.set("Pain at eyes", std::string("Yes"));
  for (auto _ : state) benchmark::DoNotOptimize(col::query(kb, facts, "Owns glasses").status);
}
BENCHMARK(BM_QueryTwoHops);

void BM_QueryApproximate(benchmark::State& state) {
  const auto kb = case_study();
  for (auto _ : state) benchmark::DoNotOptimize(col::query(kb, {}, "Pain at eyes").candidates.size());
}
BENCHMARK(BM_QueryApproximate);

void BM_Classify(benchmark::State& state) {
  const auto bins = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < bins; ++i) labels.push_back("v" + std::to_string(i));
  col::HistogramClassifier c("e1", "f", labels, col::ClassifierMode::supervised, {"A", "B", "C"});
  for (std::size_t i = 0; i < 1000; ++i) c.observe(labels[i % bins], std::string_view(i % 3 == 0 ? "A" : "B"));
  for (auto _ : state) benchmark::DoNotOptimize(c.classify(labels[1]).probabilities.size());
}
BENCHMARK(BM_Classify)->Arg(4)->Arg(64);

void BM_ParseStatement(benchmark::State& state) {
  const std::string text = R"(rule "TO SEE" : "Owns glasses" = Yes <=> "Quality vision" = Good)";
  for (auto _ : state) benchmark::DoNotOptimize(col::parse_statement(text).body.index());
}
BENCHMARK(BM_ParseStatement);

void BM_SaveLoad(benchmark::State& state) {
  const auto kb = case_study();
  for (auto _ : state) benchmark::DoNotOptimize(col::from_document(col::to_document(kb)).revision());
}
BENCHMARK(BM_SaveLoad);

}  // namespace
BENCHMARK_MAIN();
