#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vf/http.hpp"
#include "vf/rouge.hpp"

namespace vf {

/// Dense real vector; dims() is fixed within one backend session.
struct Vector {
  std::vector<double> values;

  std::size_t dims() const { return values.size(); }
  double norm() const;
  friend bool operator==(const Vector&, const Vector&) = default;
};

/// dot(a, b) / (|a| |b|), 0 when either side is the zero vector.
/// Throws DataError when dimensions differ.
double cosine(const Vector& a, const Vector& b);

/// TF-IDF vocabulary with smoothed idf = ln((1 + N) / (1 + df)) + 1.
struct LexicalModel {
  std::map<std::string, std::size_t> vocabulary;  // term -> axis, lexicographic
  std::vector<double> idf;                        // by axis
  std::size_t doc_count = 0;

  std::size_t dims() const { return idf.size(); }
  double idf_of(const std::string& term) const;
};

/// Document frequency is counted once per sentence. Throws DataError when
/// the list is empty or every sentence is empty.
LexicalModel fit_lexical(const std::vector<Tokens>& sentences);

/// tf * idf, L2-normalised when nonzero. Out-of-vocabulary terms are ignored.
Vector embed_lexical(const LexicalModel& model, const Tokens& sentence);

/// A source of sentence vectors. Every vector returned by one call lives in
/// the same space, so callers embed a query together with its candidates.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<Vector> embed_batch(const std::vector<std::string>& texts) = 0;
  /// Short identifier recorded in configuration fingerprints.
  virtual std::string name() const = 0;
};

/// Fits a LexicalModel on each call's texts and embeds them with it.
class LexicalEmbedder final : public EmbeddingBackend {
 public:
  std::vector<Vector> embed_batch(const std::vector<std::string>& texts) override;
  std::string name() const override { return "lexical-tfidf"; }
};

struct RemoteEmbedderOptions {
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
};

/// Client for `POST /embed`. Batches are sent concurrently (bounded by
/// max_in_flight) and reassembled in request order.
class RemoteEmbedder final : public EmbeddingBackend {
 public:
  explicit RemoteEmbedder(const std::string& url, RemoteEmbedderOptions options = {});

  std::vector<Vector> embed_batch(const std::vector<std::string>& texts) override;
  std::string name() const override { return "remote:" + endpoint_.url; }

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  std::vector<Vector> embed_one_batch(const std::vector<std::string>& texts,
                                      std::size_t batch_index) const;

  Endpoint endpoint_;
  RemoteEmbedderOptions options_;
};

/// Parses an `/embed` response body, checking it against the request size.
/// Throws ProtocolError on any schema violation.
std::vector<Vector> parse_embed_response(const std::string& body, std::size_t expected);

std::string make_embed_request(const std::vector<std::string>& texts);

}  // namespace vf
