#include "vf/extractive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "vf/corpus.hpp"
#include "vf/error.hpp"

namespace vf {

const char* to_string(Method m) {
  switch (m) {
    case Method::truncation:
      return "truncation";
    case Method::lexrank:
      return "lexrank";
    case Method::claimdriven:
      return "claimdriven";
  }
  return "?";
}

const char* to_string(Selection s) { return s == Selection::top ? "top" : "bottom"; }
const char* to_string(Ordering o) { return o == Ordering::article ? "article" : "ranking"; }

Method parse_method(const std::string& s) {
  if (s == "truncation") return Method::truncation;
  if (s == "lexrank") return Method::lexrank;
  if (s == "claimdriven" || s == "claim" || s == "sbert") return Method::claimdriven;
  throw UsageError("unknown method '" + s + "'");
}

Selection parse_selection(const std::string& s) {
  if (s == "top" || s == "head") return Selection::top;
  if (s == "bottom" || s == "tail") return Selection::bottom;
  throw UsageError("unknown selection '" + s + "'");
}

Ordering parse_ordering(const std::string& s) {
  if (s == "article") return Ordering::article;
  if (s == "ranking") return Ordering::ranking;
  throw UsageError("unknown ordering '" + s + "'");
}

void ExtractConfig::validate() const {
  if (k && *k == 0) throw UsageError("k must be >= 1");
  if (!(lexrank.damping > 0.0 && lexrank.damping < 1.0)) {
    throw UsageError("LexRank damping must lie in (0, 1)");
  }
  if (!(lexrank.tolerance > 0.0) || lexrank.max_iters < 1) {
    throw UsageError("LexRank tolerance must be positive and max_iters >= 1");
  }
}

std::string ExtractConfig::k_label() const { return k ? std::to_string(*k) : "auto"; }

Ranking ranking_from_scores(const std::vector<double>& scores, Method method) {
  Ranking r;
  r.method = method;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  r.scores.reserve(scores.size());
  for (std::size_t i : r.order) r.scores.push_back(scores[i]);
  return r;
}

Ranking rank_truncation(const SegmentedDoc& article) {
  const std::size_t s = article.sentence_count();
  if (s == 0) throw DataError("cannot rank an article without sentences");
  Ranking r;
  r.method = Method::truncation;
  for (std::size_t i = 0; i < s; ++i) {
    r.order.push_back(i);
    r.scores.push_back(static_cast<double>(s - i));
  }
  return r;
}

std::vector<std::vector<double>> sentence_similarity(const SegmentedDoc& article) {
  const std::size_t s = article.sentence_count();
  std::vector<Tokens> tokens;
  tokens.reserve(s);
  bool any = false;
  for (std::size_t i = 0; i < s; ++i) {
    tokens.push_back(tokenize(article.sentence(i)));
    any = any || !tokens.back().empty();
  }
  std::vector<std::vector<double>> sim(s, std::vector<double>(s, 0.0));
  if (!any) return sim;
  const LexicalModel model = fit_lexical(tokens);
  std::vector<Vector> vectors;
  vectors.reserve(s);
  for (const auto& t : tokens) vectors.push_back(embed_lexical(model, t));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      sim[i][j] = sim[j][i] = cosine(vectors[i], vectors[j]);
    }
  }
  return sim;
}

std::vector<double> lexrank_scores(const std::vector<std::vector<double>>& similarity,
                                   const LexRankParams& params) {
  const std::size_t s = similarity.size();
  if (s == 0) return {};
  const double uniform = 1.0 / static_cast<double>(s);

  // Row-stochastic transition matrix with damping folded in.
  std::vector<std::vector<double>> p(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    if (similarity[i].size() != s) throw DataError("similarity matrix is not square");
    double row_sum = 0.0;
    for (double w : similarity[i]) {
      if (w < 0.0) throw DataError("similarity weights must be nonnegative");
      row_sum += w;
    }
    for (std::size_t j = 0; j < s; ++j) {
      const double m = row_sum > 0.0 ? similarity[i][j] / row_sum : uniform;
      p[i][j] = params.damping * m + (1.0 - params.damping) * uniform;
    }
  }

  std::vector<double> x(s, uniform);
  std::vector<double> next(s);
  for (int iter = 0; iter < params.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) next[j] += x[i] * p[i][j];
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double delta = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      next[j] /= total;
      delta = std::max(delta, std::abs(next[j] - x[j]));
    }
    x.swap(next);
    if (delta < params.tolerance) break;
  }
  return x;
}

Ranking rank_lexrank(const SegmentedDoc& article, const LexRankParams& params) {
  if (article.sentence_count() == 0) throw DataError("cannot rank an article without sentences");
  return ranking_from_scores(lexrank_scores(sentence_similarity(article), params),
                             Method::lexrank);
}

Ranking rank_claim(const SegmentedDoc& article, const SegmentedDoc& claim,
                   EmbeddingBackend& backend) {
  if (article.sentence_count() == 0) throw DataError("cannot rank an article without sentences");
  if (trim(claim.text).empty()) throw DataError("claim-driven ranking needs a claim");
  std::vector<std::string> texts;
  texts.reserve(article.sentence_count() + 1);
  texts.emplace_back(trim(claim.text));
  for (std::size_t i = 0; i < article.sentence_count(); ++i) {
    texts.emplace_back(article.sentence(i));
  }
  const auto vectors = backend.embed_batch(texts);
  if (vectors.size() != texts.size()) {
    throw ProtocolError("embedding backend returned a wrong number of vectors");
  }
  std::vector<double> scores;
  scores.reserve(article.sentence_count());
  for (std::size_t i = 1; i < vectors.size(); ++i) scores.push_back(cosine(vectors[0], vectors[i]));
  return ranking_from_scores(scores, Method::claimdriven);
}

std::optional<std::size_t> known_auto_k(const std::string& dataset_tag) {
  std::string tag;
  for (char c : dataset_tag) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '+') {
      tag += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (tag == "fullfact" || tag == "ff") return 2;
  if (tag == "liarpp" || tag == "liar++" || tag == "l++" || tag == "lpp") return 6;
  return std::nullopt;
}

std::size_t auto_k(const Corpus& corpus) {
  if (auto known = known_auto_k(corpus.dataset_tag())) return *known;
  if (corpus.empty()) throw DataError("k = auto needs a non-empty corpus");
  double total = 0.0;
  for (const auto& seg : corpus.segmented()) {
    total += static_cast<double>(seg.verdict.sentence_count());
  }
  const auto mean = total / static_cast<double>(corpus.size());
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(mean)));
}

std::vector<std::size_t> select_indices(const Ranking& ranking, std::size_t k,
                                        Selection selection, Ordering ordering) {
  const std::size_t take = std::min(k, ranking.order.size());
  std::vector<std::size_t> chosen;
  if (selection == Selection::top) {
    chosen.assign(ranking.order.begin(),
                  ranking.order.begin() + static_cast<std::ptrdiff_t>(take));
  } else {
    chosen.assign(ranking.order.end() - static_cast<std::ptrdiff_t>(take), ranking.order.end());
  }
  if (ordering == Ordering::article) std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Extract extract(const SegmentedDoc& article, const SegmentedDoc& claim,
                const ExtractConfig& config, const ExtractContext& context) {
  config.validate();
  Ranking ranking;
  switch (config.method) {
    case Method::truncation:
      ranking = rank_truncation(article);
      break;
    case Method::lexrank:
      ranking = rank_lexrank(article, config.lexrank);
      break;
    case Method::claimdriven:
      if (context.embedder == nullptr) {
        throw UsageError("claim-driven extraction needs an embedding backend");
      }
      ranking = rank_claim(article, claim, *context.embedder);
      break;
  }
  std::size_t k = 0;
  if (config.k) {
    k = *config.k;
  } else {
    if (context.auto_k == 0) throw UsageError("k = auto was not resolved against a corpus");
    k = context.auto_k;
  }

  Extract out;
  out.config = config;
  out.indices = select_indices(ranking, k, config.selection, config.ordering);
  for (std::size_t i : out.indices) out.sentences.emplace_back(article.sentence(i));
  out.text = join_sentences(out.sentences);
  return out;
}

}  // namespace vf
