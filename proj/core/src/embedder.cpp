#include "vf/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "vf/error.hpp"
#include "vf/parallel.hpp"
#include "vf/text.hpp"

namespace vf {

using nlohmann::json;

double Vector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

double cosine(const Vector& a, const Vector& b) {
  if (a.dims() != b.dims()) {
    throw DataError("cosine of vectors with " + std::to_string(a.dims()) + " and " +
                    std::to_string(b.dims()) + " dims");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double LexicalModel::idf_of(const std::string& term) const {
  auto it = vocabulary.find(term);
  return it == vocabulary.end() ? 0.0 : idf[it->second];
}

LexicalModel fit_lexical(const std::vector<Tokens>& sentences) {
  if (sentences.empty()) throw DataError("cannot fit a lexical model on no sentences");
  std::map<std::string, std::size_t> df;
  for (const auto& sentence : sentences) {
    for (const auto& term : std::set<std::string>(sentence.begin(), sentence.end())) {
      ++df[term];
    }
  }
  if (df.empty()) throw DataError("cannot fit a lexical model on empty sentences");

  LexicalModel model;
  model.doc_count = sentences.size();
  model.idf.reserve(df.size());
  const double n = static_cast<double>(model.doc_count);
  for (const auto& [term, count] : df) {
    model.vocabulary.emplace(term, model.idf.size());
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return model;
}

Vector embed_lexical(const LexicalModel& model, const Tokens& sentence) {
  Vector v{std::vector<double>(model.dims(), 0.0)};
  for (const auto& term : sentence) {
    auto it = model.vocabulary.find(term);
    if (it != model.vocabulary.end()) v.values[it->second] += 1.0;
  }
  for (std::size_t i = 0; i < v.dims(); ++i) v.values[i] *= model.idf[i];
  const double norm = v.norm();
  if (norm > 0.0) {
    for (double& x : v.values) x /= norm;
  }
  return v;
}

std::vector<Vector> LexicalEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<Tokens> tokens;
  tokens.reserve(texts.size());
  bool any = false;
  for (const auto& t : texts) {
    tokens.push_back(tokenize(t));
    any = any || !tokens.back().empty();
  }
  if (!any) return std::vector<Vector>(texts.size());
  const LexicalModel model = fit_lexical(tokens);
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : tokens) out.push_back(embed_lexical(model, t));
  return out;
}

std::string make_embed_request(const std::vector<std::string>& texts) {
  return json{{"texts", texts}}.dump();
}

std::vector<Vector> parse_embed_response(const std::string& body, std::size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("/embed response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc["dims"].is_number_integer() ||
      !doc.contains("vectors") || !doc["vectors"].is_array()) {
    throw ProtocolError("/embed response lacks integer 'dims' or array 'vectors'");
  }
  const auto dims = doc["dims"].get<long long>();
  if (dims < 0) throw ProtocolError("/embed response has negative dims");
  const auto& vectors = doc["vectors"];
  if (vectors.size() != expected) {
    throw ProtocolError("/embed returned " + std::to_string(vectors.size()) +
                        " vectors for " + std::to_string(expected) + " texts");
  }
  std::vector<Vector> out;
  out.reserve(expected);
  for (const auto& row : vectors) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dims)) {
      throw ProtocolError("/embed vector length differs from dims " + std::to_string(dims));
    }
    Vector v;
    v.values.reserve(row.size());
    for (const auto& x : row) {
      if (!x.is_number()) throw ProtocolError("/embed vector holds a non-number");
      const double value = x.get<double>();
      if (!std::isfinite(value)) throw ProtocolError("/embed vector holds a non-finite value");
      v.values.push_back(value);
    }
    out.push_back(std::move(v));
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(const std::string& url, RemoteEmbedderOptions options)
    : endpoint_(Endpoint::parse(url)), options_(options) {
  if (options_.batch_size == 0) throw UsageError("embedding batch size must be >= 1");
}

std::vector<Vector> RemoteEmbedder::embed_one_batch(const std::vector<std::string>& texts,
                                                    std::size_t batch_index) const {
  HttpResponse res;
  try {
    res = post_json(endpoint_, "/embed", make_embed_request(texts), options_.retry);
  } catch (const BackendError& e) {
    throw BackendError("embedding batch " + std::to_string(batch_index) + " failed: " +
                       e.what());
  }
  if (res.status != 200) {
    throw BackendError(endpoint_.url + "/embed batch " + std::to_string(batch_index) +
                       ": HTTP " + std::to_string(res.status) + " " + res.body);
  }
  return parse_embed_response(res.body, texts.size());
}

std::vector<Vector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  const std::size_t batches = (texts.size() + options_.batch_size - 1) / options_.batch_size;
  auto parts = ordered_parallel_map(batches, options_.max_in_flight, [&](std::size_t b) {
    const auto from = b * options_.batch_size;
    const auto to = std::min(texts.size(), from + options_.batch_size);
    return embed_one_batch(
        std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(from),
                                 texts.begin() + static_cast<std::ptrdiff_t>(to)),
        b);
  });
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (auto& part : parts) {
    for (auto& v : part) {
      if (!out.empty() && v.dims() != out.front().dims()) {
        throw ProtocolError("/embed dims changed between batches");
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace vf
