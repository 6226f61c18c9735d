#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vf/extractive.hpp"
#include "vf/http.hpp"
#include "vf/rouge.hpp"

namespace vf {

class Corpus;

enum class InputMode { article, claim_article };

const char* to_string(InputMode m);
InputMode parse_input_mode(const std::string& s);

/// Generator input held within a subword budget.
struct GenInput {
  std::string triple_id;
  InputMode mode = InputMode::article;
  std::optional<std::string> claim;  // set in claim_article mode
  std::string context;               // retained extract sentences
  std::string text;                  // full templated input measured against the budget
  std::size_t budget = 0;
  std::size_t dropped_sentences = 0;
};

enum class DecodingStrategy { beam, topk, nucleus, typical };

const char* to_string(DecodingStrategy s);
DecodingStrategy parse_decoding_strategy(const std::string& s);

struct DecodingSpec {
  DecodingStrategy strategy = DecodingStrategy::beam;
  std::map<std::string, double> params;  // forwarded verbatim

  /// Reference defaults: 5 beams, top-k 40, nucleus p 0.9, typical p 0.95.
  static DecodingSpec defaults(DecodingStrategy strategy);
  /// Throws UsageError on beams < 1, k < 1 or p outside (0, 1].
  void validate() const;
  std::string label() const;
};

struct GenResult {
  std::string triple_id;
  std::string text;
  DecodingSpec decoding;
  std::string endpoint;
  bool empty = false;  // excluded from scoring
};

/// `claim: <claim> context: <extract>` in claim_article mode, the bare
/// extract in article mode. Over-budget inputs lose whole extract sentences
/// from the end until they fit; the claim is never cut. Throws DataError
/// when not even the claim (if any) plus one sentence fits.
GenInput assemble_input(const SegmentedDoc& claim, const Extract& extract, InputMode mode,
                        std::size_t budget, double calibration = 1.35,
                        std::string triple_id = {});

std::string make_generate_request(const GenInput& input, const DecodingSpec& decoding,
                                  std::int64_t seed);
/// Extracts `text` from a `/generate` response. Throws ProtocolError.
std::string parse_generate_response(const std::string& body);

struct GenerationOptions {
  std::size_t max_in_flight = 2;
  RetryPolicy retry;
};

/// Client for `POST /generate`.
class GenerationClient {
 public:
  explicit GenerationClient(const std::string& url, GenerationOptions options = {});

  /// Transport failures surface as BackendError naming the triple.
  GenResult generate(const GenInput& input, const DecodingSpec& decoding,
                     std::int64_t seed) const;
  /// Concurrent calls; results keep the order of `inputs`.
  std::vector<GenResult> generate_all(const std::vector<GenInput>& inputs,
                                      const DecodingSpec& decoding, std::int64_t seed) const;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
  GenerationOptions options_;
};

struct GenerationScores {
  RougeTriplet mean;  // F1 is the headline figure
  std::size_t scored = 0;
  std::size_t excluded = 0;
};

/// ROUGE of each generated text against its gold verdict, averaged.
/// Empty generations are excluded and counted; an unknown id or an empty
/// remainder is a DataError.
GenerationScores score_generations(const std::vector<GenResult>& results, const Corpus& corpus);

}  // namespace vf
