#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vf/embedder.hpp"
#include "vf/text.hpp"

namespace vf {

class Corpus;

enum class Method { truncation, lexrank, claimdriven };
enum class Selection { top, bottom };
enum class Ordering { article, ranking };

const char* to_string(Method m);
const char* to_string(Selection s);
const char* to_string(Ordering o);
/// Throw UsageError naming the unknown value.
Method parse_method(const std::string& s);
Selection parse_selection(const std::string& s);
Ordering parse_ordering(const std::string& s);

/// Article sentences ordered best first.
struct Ranking {
  std::vector<std::size_t> order;
  std::vector<double> scores;  // aligned with order
  Method method = Method::truncation;
};

struct LexRankParams {
  double damping = 0.85;
  double tolerance = 1e-6;  // L-infinity change between iterations
  int max_iters = 100;
};

struct ExtractConfig {
  Method method = Method::truncation;
  std::optional<std::size_t> k;  // nullopt means `auto`
  Selection selection = Selection::top;
  Ordering ordering = Ordering::article;
  LexRankParams lexrank;

  /// Throws UsageError when k == 0 or damping is outside (0, 1).
  void validate() const;
  std::string k_label() const;
};

struct Extract {
  std::vector<std::size_t> indices;     // as emitted
  std::vector<std::string> sentences;   // texts of `indices`, same order
  std::string text;                     // sentences joined by one space
  ExtractConfig config;
};

/// Positional ranking: order 0..S-1 with score S - i.
Ranking rank_truncation(const SegmentedDoc& article);

/// Stationary distribution of P = d*M + (1-d)/S by power iteration from the
/// uniform vector, where M is `similarity` row-normalised. Rows summing to
/// zero are replaced by the uniform row. Returns a probability vector.
std::vector<double> lexrank_scores(const std::vector<std::vector<double>>& similarity,
                                   const LexRankParams& params = {});

/// Pairwise cosine of TF-IDF vectors fit on the article's own sentences.
std::vector<std::vector<double>> sentence_similarity(const SegmentedDoc& article);

/// Continuous LexRank over the article sentences.
Ranking rank_lexrank(const SegmentedDoc& article, const LexRankParams& params = {});

/// Cosine between the claim and every sentence, embedded in one backend call.
Ranking rank_claim(const SegmentedDoc& article, const SegmentedDoc& claim,
                   EmbeddingBackend& backend);

/// Descending score, ties broken by the smaller sentence index.
Ranking ranking_from_scores(const std::vector<double>& scores, Method method);

/// Sentence count used for k = auto: 2 for FullFact-tagged data, 6 for
/// LIAR++-tagged data (mean verdict length in the reference corpora), and
/// otherwise the rounded mean verdict sentence count of `corpus`.
std::size_t auto_k(const Corpus& corpus);
std::optional<std::size_t> known_auto_k(const std::string& dataset_tag);

struct ExtractContext {
  EmbeddingBackend* embedder = nullptr;  // required for claimdriven
  std::size_t auto_k = 0;                // required when config.k is auto
};

/// Ranks, selects k sentences (top: best k; bottom: worst k, kept in
/// descending-score order) and emits them in article or ranking order.
Extract extract(const SegmentedDoc& article, const SegmentedDoc& claim,
                const ExtractConfig& config, const ExtractContext& context);

/// Applies selection and ordering to an existing ranking.
std::vector<std::size_t> select_indices(const Ranking& ranking, std::size_t k,
                                        Selection selection, Ordering ordering);

}  // namespace vf
