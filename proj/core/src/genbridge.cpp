#include "vf/genbridge.hpp"

#include <cmath>

#include <json.hpp>

#include "vf/corpus.hpp"
#include "vf/error.hpp"
#include "vf/parallel.hpp"

namespace vf {

using nlohmann::json;

const char* to_string(InputMode m) {
  return m == InputMode::article ? "article" : "claim_article";
}

InputMode parse_input_mode(const std::string& s) {
  if (s == "article") return InputMode::article;
  if (s == "claim_article" || s == "claim+article") return InputMode::claim_article;
  throw UsageError("unknown input mode '" + s + "'");
}

const char* to_string(DecodingStrategy s) {
  switch (s) {
    case DecodingStrategy::beam:
      return "beam";
    case DecodingStrategy::topk:
      return "topk";
    case DecodingStrategy::nucleus:
      return "nucleus";
    case DecodingStrategy::typical:
      return "typical";
  }
  return "?";
}

DecodingStrategy parse_decoding_strategy(const std::string& s) {
  for (auto d : {DecodingStrategy::beam, DecodingStrategy::topk, DecodingStrategy::nucleus,
                 DecodingStrategy::typical}) {
    if (s == to_string(d)) return d;
  }
  throw UsageError("unknown decoding strategy '" + s + "'");
}

DecodingSpec DecodingSpec::defaults(DecodingStrategy strategy) {
  switch (strategy) {
    case DecodingStrategy::beam:
      return {strategy, {{"num_beams", 5}}};
    case DecodingStrategy::topk:
      return {strategy, {{"top_k", 40}}};
    case DecodingStrategy::nucleus:
      return {strategy, {{"top_p", 0.9}}};
    case DecodingStrategy::typical:
      return {strategy, {{"typical_p", 0.95}}};
  }
  return {strategy, {}};
}

void DecodingSpec::validate() const {
  for (const auto& [key, value] : params) {
    if (!std::isfinite(value)) throw UsageError("decoding parameter '" + key + "' is not finite");
    if ((key == "num_beams" || key == "top_k") && value < 1.0) {
      throw UsageError("decoding parameter '" + key + "' must be >= 1");
    }
    if ((key == "top_p" || key == "typical_p") && !(value > 0.0 && value <= 1.0)) {
      throw UsageError("decoding parameter '" + key + "' must lie in (0, 1]");
    }
  }
}

std::string DecodingSpec::label() const {
  std::string out = to_string(strategy);
  for (const auto& [key, value] : params) out += ";" + key + "=" + json(value).dump();
  return out;
}

GenInput assemble_input(const SegmentedDoc& claim, const Extract& extract, InputMode mode,
                        std::size_t budget, double calibration, std::string triple_id) {
  if (extract.sentences.empty()) throw DataError("cannot assemble input from an empty extract");
  GenInput in;
  in.triple_id = std::move(triple_id);
  in.mode = mode;
  in.budget = budget;
  if (mode == InputMode::claim_article) in.claim = claim.text;

  std::vector<std::string> kept = extract.sentences;
  while (!kept.empty()) {
    in.context = join_sentences(kept);
    in.text = mode == InputMode::claim_article ? "claim: " + claim.text + " context: " + in.context
                                               : in.context;
    if (estimate_subwords(in.text, calibration) <= budget) return in;
    kept.pop_back();
    ++in.dropped_sentences;
  }
  throw DataError("budget " + std::to_string(budget) + " cannot hold " +
                  (mode == InputMode::claim_article ? "the claim and one sentence"
                                                    : "a single sentence") +
                  (in.triple_id.empty() ? "" : " for '" + in.triple_id + "'"));
}

std::string make_generate_request(const GenInput& input, const DecodingSpec& decoding,
                                  std::int64_t seed) {
  json params = json::object();
  for (const auto& [key, value] : decoding.params) {
    if (std::floor(value) == value && std::abs(value) < 1e15) {
      params[key] = static_cast<std::int64_t>(value);
    } else {
      params[key] = value;
    }
  }
  json body = {{"claim", input.claim ? json(*input.claim) : json(nullptr)},
               {"context", input.context},
               {"mode", to_string(input.mode)},
               {"decoding", {{"strategy", to_string(decoding.strategy)}, {"params", params}}},
               {"seed", seed}};
  return body.dump();
}

std::string parse_generate_response(const std::string& body) {
  try {
    const json doc = json::parse(body);
    if (!doc.is_object() || !doc.contains("text") || !doc["text"].is_string()) {
      throw ProtocolError("/generate response lacks string 'text'");
    }
    return doc["text"].get<std::string>();
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("/generate response is not JSON: ") + e.what());
  }
}

GenerationClient::GenerationClient(const std::string& url, GenerationOptions options)
    : endpoint_(Endpoint::parse(url)), options_(options) {}

GenResult GenerationClient::generate(const GenInput& input, const DecodingSpec& decoding,
                                     std::int64_t seed) const {
  decoding.validate();
  HttpResponse res;
  try {
    res = post_json(endpoint_, "/generate", make_generate_request(input, decoding, seed),
                    options_.retry);
  } catch (const BackendError& e) {
    throw BackendError("generation for '" + input.triple_id + "' failed: " + e.what());
  }
  if (res.status != 200) {
    throw BackendError("generation for '" + input.triple_id + "': HTTP " +
                       std::to_string(res.status) + " " + res.body);
  }
  GenResult out;
  out.triple_id = input.triple_id;
  out.text = parse_generate_response(res.body);
  out.decoding = decoding;
  out.endpoint = endpoint_.url;
  out.empty = trim(out.text).empty();
  return out;
}

std::vector<GenResult> GenerationClient::generate_all(const std::vector<GenInput>& inputs,
                                                      const DecodingSpec& decoding,
                                                      std::int64_t seed) const {
  return ordered_parallel_map(inputs.size(), options_.max_in_flight,
                              [&](std::size_t i) { return generate(inputs[i], decoding, seed); });
}

GenerationScores score_generations(const std::vector<GenResult>& results, const Corpus& corpus) {
  GenerationScores out;
  std::vector<RougeTriplet> scores;
  for (const auto& r : results) {
    const auto pos = corpus.find(r.triple_id);
    if (!pos) throw DataError("generation for unknown id '" + r.triple_id + "'");
    if (r.empty || trim(r.text).empty()) {
      ++out.excluded;
      continue;
    }
    scores.push_back(rouge_all(tokenize(r.text), corpus.segmented(*pos).verdict.words()));
  }
  if (scores.empty()) throw DataError("no generations left to score");
  out.scored = scores.size();
  out.mean = aggregate(scores);
  return out;
}

}  // namespace vf
