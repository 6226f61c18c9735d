#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "vf/corpus.hpp"
#include "vf/rouge.hpp"

namespace vf {

struct ElementLength {
  Field element = Field::article;
  double mean_sentences = 0.0;
  double mean_tokens = 0.0;
  double mean_subwords = 0.0;
};

struct BudgetExceedance {
  std::size_t budget = 0;
  double fraction = 0.0;  // articles whose subword count is above `budget`
};

struct LengthStats {
  std::string dataset;
  std::vector<ElementLength> elements;  // article, claim, verdict
  std::vector<BudgetExceedance> article_over_budget;

  const ElementLength& get(Field f) const;
};

/// Mean sentence, token and subword counts per element; exceedance is
/// measured on article subword counts. Throws DataError on an empty corpus.
LengthStats length_stats(const Corpus& corpus, const std::vector<std::size_t>& budgets = {512, 1024});

/// Which text pair is compared. The first-named text is the ROUGE
/// reference, so recall reads "how much of it appears in the second".
enum class PairKind { verdict_article, claim_verdict, claim_article };
/// `no_first` / `no_last` drop a sentence from the container text: the
/// article for verdict_article and claim_article, the verdict for
/// claim_verdict.
enum class AblationVariant { complete, no_first, no_last };

const char* to_string(PairKind p);
const char* to_string(AblationVariant v);
PairKind parse_pair_kind(const std::string& s);
AblationVariant parse_ablation(const std::string& s);

/// Field scored as reference and field ablated/used as candidate.
Field reference_field(PairKind p);
Field container_field(PairKind p);

struct OverlapStats {
  std::string dataset;
  PairKind pair = PairKind::verdict_article;
  AblationVariant variant = AblationVariant::complete;
  RougeTriplet mean;          // recall and f1 are the reported columns
  std::size_t scored = 0;
  std::size_t excluded = 0;   // container empty after ablation
};

/// Mean ROUGE over triples; triples whose ablated container has no tokens
/// are excluded and counted. Throws DataError when nothing is left to score.
OverlapStats overlap_stats(const Corpus& corpus, PairKind pair, AblationVariant variant);

/// Tokens of `doc` without its first or last sentence.
Tokens ablated_tokens(const SegmentedDoc& doc, AblationVariant variant);

struct AnalysisReport {
  LengthStats lengths;
  std::vector<OverlapStats> overlaps;  // pair-major, variant-minor: 9 entries
};

AnalysisReport analyze(const Corpus& corpus, const std::vector<std::size_t>& budgets = {512, 1024});

/// Long-format CSV: `table,dataset,variant,metric,value`.
std::string report_csv(const AnalysisReport& report);
/// Parses report_csv output back. Throws DataError on malformed input.
AnalysisReport parse_report_csv(const std::string& csv);
/// Markdown summary with the tokenizer/segmenter configuration header.
std::string report_markdown(const AnalysisReport& report, const Corpus& corpus);

/// Writes `analysis.csv` and `analysis.md` under `out_dir` (created if
/// missing). Throws IoError when the directory or files cannot be written.
AnalysisReport report(const Corpus& corpus, const std::filesystem::path& out_dir);

/// One-line description of the segmentation and ROUGE settings in use.
std::string text_config_fingerprint(const SegmenterOptions& options);

}  // namespace vf
