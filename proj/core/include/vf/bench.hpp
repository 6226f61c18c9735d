#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vf/corpus.hpp"
#include "vf/embedder.hpp"
#include "vf/extractive.hpp"
#include "vf/genbridge.hpp"
#include "vf/rouge.hpp"

namespace vf {

enum class Stage { extractive_only, extractive_plus_generation };

const char* to_string(Stage s);
Stage parse_stage(const std::string& s);

/// The generation half of a grid cell. Model and fine-tuning labels are
/// opaque; they only select an endpoint and an input configuration.
struct GenerationSetup {
  std::string model;
  std::string finetuning;
  std::string endpoint;
  InputMode mode = InputMode::article;
  std::size_t budget = 1024;
  DecodingSpec decoding;
};

/// One cell of the benchmark grid.
struct RunConfig {
  std::string dataset;
  ExtractConfig extract;
  Stage stage = Stage::extractive_only;
  std::optional<GenerationSetup> generation;  // present iff stage is generation
  std::int64_t seed = 0;
  std::string embedder = "lexical-tfidf";
  std::string text_config;  // segmenter/tokenizer/ROUGE settings

  /// Canonical `key=value;...` description; equal strings mean equal runs.
  std::string canonical() const;
  /// 16 hex digits of the FNV-1a hash of canonical().
  std::string fingerprint() const;
};

/// Parsed grid declaration. Axis keys take comma-separated lists; dotted
/// keys configure individual axis values.
///
///   datasets    = liarpp, fullfact
///   methods     = truncation, lexrank, claimdriven
///   selections  = top, bottom
///   orderings   = article, ranking
///   k           = auto
///   stages      = extractive_only, extractive_plus_generation
///   models      = t5, dbart, pegxsum, pegcnn
///   finetunings = unsupervised, article, claim_article
///   decodings   = beam, topk, nucleus, typical
///   seeds       = 42
///   gen_endpoint = http://127.0.0.1:8080
///   model.t5.budget = 512
///   model.t5.endpoint = http://...
///   endpoint.t5.article = http://...        (per model and fine-tuning)
///   finetuning.unsupervised.mode = article
///   decoding.beam.num_beams = 5
///   lexrank.damping = 0.85
///
/// Truncation ignores the ordering axis (both orderings emit head/tail in
/// article order), so three methods x two selections x two
/// orderings give 10 summary configurations rather than 12.
struct GridSpec {
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  std::vector<Selection> selections;
  std::vector<Ordering> orderings;
  std::vector<std::optional<std::size_t>> ks;
  std::vector<Stage> stages;
  std::vector<std::string> models;
  std::vector<std::string> finetunings;
  std::vector<DecodingStrategy> decodings;
  std::vector<std::int64_t> seeds;
  std::string gen_endpoint;
  std::map<std::string, std::size_t> model_budget;
  std::map<std::string, std::string> model_endpoint;
  std::map<std::pair<std::string, std::string>, std::string> cell_endpoint;
  std::map<std::string, InputMode> finetuning_mode;
  std::map<DecodingStrategy, std::map<std::string, double>> decoding_params;
  LexRankParams lexrank;

  /// Throws UsageError naming the offending line, key or value.
  static GridSpec parse(const std::string& text);
  static GridSpec load(const std::filesystem::path& path);

  /// Number of distinct summary configurations per dataset and k.
  std::size_t summary_count() const;
};

/// Cartesian product of the declared axes, sorted by canonical string.
/// `embedder` and `text_config` are stamped into every cell.
std::vector<RunConfig> expand_grid(const GridSpec& spec,
                                   const std::string& embedder = "lexical-tfidf",
                                   const std::string& text_config = {});

struct RunResult {
  RunConfig config;
  RougeTriplet mean;
  std::size_t triples = 0;   // scored
  std::size_t excluded = 0;
  bool unreliable = false;   // more than 10% of triples excluded
  double wall_seconds = 0.0;
};

struct Backends {
  EmbeddingBackend* embedder = nullptr;
  std::size_t jobs = 1;  // triple-level parallelism
  GenerationOptions generation;
  double subword_calibration = 1.35;
};

/// Extracts (and optionally generates) for every triple, scores against the
/// gold verdict and averages. Per-triple data errors and empty generations
/// are excluded and counted; backend failures propagate.
RunResult run(const Corpus& corpus, const RunConfig& config, const Backends& backends);

/// Writes `bench.csv` and `bench.md` under `out_dir`. Output depends only
/// on the results' configurations and scores, never on timing.
void compare(const std::vector<RunResult>& results, const std::filesystem::path& out_dir);

std::string results_csv(const std::vector<RunResult>& results);
std::string results_markdown(const std::vector<RunResult>& results);

}  // namespace vf
