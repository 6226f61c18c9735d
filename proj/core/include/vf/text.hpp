#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vf {

/// Half-open byte range [start, end) into a text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  std::string_view of(std::string_view text) const {
    return text.substr(start, end - start);
  }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Abbreviations that end in a period but never end a sentence.
const std::vector<std::string>& default_abbreviations();

struct SegmenterOptions {
  std::vector<std::string> abbreviations = default_abbreviations();
  /// Word tokens to subword tokens ratio used by estimate_subwords.
  double subword_calibration = 1.35;
};

/// Rule-based sentence boundaries. A sentence ends at a run of `.`, `!` or
/// `?` (plus trailing closing quotes/brackets) that is followed by
/// whitespace and an uppercase letter, or by the end of the text. Periods
/// closing a listed abbreviation, a single-letter initial or sitting inside
/// a number never end a sentence. Spans are trimmed of surrounding
/// whitespace.
std::vector<Span> split_sentences(std::string_view text,
                                  const std::vector<std::string>& abbreviations =
                                      default_abbreviations());

/// Word-token spans: maximal runs of alphanumeric characters. Non-ASCII
/// letters count as alphanumeric; Unicode punctuation and spaces do not.
std::vector<Span> token_spans(std::string_view text);

/// Lowercased word tokens (ASCII case folding), digits kept.
std::vector<std::string> tokenize(std::string_view text);

/// ceil(token_count * calibration). Throws DataError when calibration <= 0.
std::size_t estimate_subwords(std::size_t token_count, double calibration = 1.35);
std::size_t estimate_subwords(std::string_view text, double calibration = 1.35);

/// Text together with its sentence and token segmentation.
struct SegmentedDoc {
  std::string text;
  std::vector<Span> sentences;
  std::vector<Span> tokens;
  std::size_t subword_estimate = 0;

  std::size_t sentence_count() const { return sentences.size(); }
  std::size_t token_count() const { return tokens.size(); }
  std::string_view sentence(std::size_t i) const { return sentences.at(i).of(text); }
  std::vector<std::string> sentence_texts() const;
  /// Lowercased tokens of the whole text.
  std::vector<std::string> words() const;
};

/// Segments `text`. The subword estimate is never below the token count.
SegmentedDoc segment(std::string text, const SegmenterOptions& options = {});

/// Joins strings with a single space.
std::string join_sentences(const std::vector<std::string>& sentences);

std::string_view trim(std::string_view s);

}  // namespace vf
