#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "vf/bench.hpp"
#include "vf/extractive.hpp"
#include "vf/rouge.hpp"
#include "vf/text.hpp"

namespace {

std::string make_article(std::size_t sentences, std::uint64_t seed) {
  static const char* kWords[] = {"budget", "school", "funding", "governor", "claim",  "report",
                                 "percent", "state",  "vote",    "senate",   "tax",    "record",
                                 "bridge", "water",  "police",  "housing",  "permit", "rebate"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, 17);
  std::uniform_int_distribution<int> len(8, 24);
  std::string out;
  for (std::size_t i = 0; i < sentences; ++i) {
    if (!out.empty()) out += ' ';
    out += "The";
    for (int w = len(rng); w > 0; --w) out += std::string(" ") + kWords[word(rng)];
    out += '.';
  }
  return out;
}

void BM_SplitSentences(benchmark::State& state) {
  const auto text = make_article(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(vf::split_sentences(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_SplitSentences)->Arg(40)->Arg(400);

void BM_RougeL(benchmark::State& state) {
  const auto a = vf::tokenize(make_article(static_cast<std::size_t>(state.range(0)), 2));
  const auto b = vf::tokenize(make_article(static_cast<std::size_t>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(vf::rouge_l(a, b));
}
BENCHMARK(BM_RougeL)->Arg(5)->Arg(40);

void BM_LexRank(benchmark::State& state) {
  const auto doc = vf::segment(make_article(static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(vf::rank_lexrank(doc));
}
BENCHMARK(BM_LexRank)->Arg(12)->Arg(40)->Arg(120);

void BM_ClaimDriven(benchmark::State& state) {
  const auto doc = vf::segment(make_article(static_cast<std::size_t>(state.range(0)), 5));
  const auto claim = vf::segment("The governor cut school funding by ten percent.");
  vf::LexicalEmbedder embedder;
  for (auto _ : state) benchmark::DoNotOptimize(vf::rank_claim(doc, claim, embedder));
}
BENCHMARK(BM_ClaimDriven)->Arg(40);

void BM_RunSyntheticCorpus(benchmark::State& state) {
  const auto corpus = vf::load_corpus(std::string(VF_FIXTURE_DIR) + "/synthetic/liarpp.jsonl");
  vf::LexicalEmbedder embedder;
  vf::RunConfig config;
  config.dataset = "liarpp";
  config.extract.method = vf::Method::lexrank;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        vf::run(corpus, config, vf::Backends{&embedder, static_cast<std::size_t>(state.range(0))}));
  }
}
BENCHMARK(BM_RunSyntheticCorpus)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
