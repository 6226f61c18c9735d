#include "vf/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "vf/error.hpp"

namespace vf {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Decodes one UTF-8 sequence at `pos`; returns the code point and advances
// `len`. Malformed bytes decode as U+FFFD with length 1.
char32_t decode(std::string_view s, std::size_t pos, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    len = 1;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(extra) >= s.size()) {
    len = 1;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) {
      len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  len = static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  if (cp == 0xFFFD) return false;
  if (cp <= 0xBF) return false;  // C1 controls, NBSP, Latin-1 punctuation
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return false;
  if (cp == 0xFEFF) return false;
  return true;
}

// Closing quotes and brackets that may trail a terminator run.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (s.substr(pos, 3) == "\xE2\x80\x99" || s.substr(pos, 3) == "\xE2\x80\x9D") return 3;
  return 0;
}

std::size_t opener_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[') return 1;
  if (s.substr(pos, 3) == "\xE2\x80\x98" || s.substr(pos, 3) == "\xE2\x80\x9C") return 3;
  return 0;
}

// True when the period at `dot` closes an abbreviation or an initial.
bool protected_period(std::string_view text, std::size_t dot,
                      const std::vector<std::string>& abbreviations) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < dot && opener_length(text, begin) > 0) begin += opener_length(text, begin);
  const std::string_view word = text.substr(begin, dot + 1 - begin);
  if (std::find(abbreviations.begin(), abbreviations.end(), word) != abbreviations.end()) {
    return true;
  }
  return word.size() == 2 && std::isupper(static_cast<unsigned char>(word[0]));
}

}  // namespace

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kAbbreviations = {
      "U.S.", "U.K.", "U.N.", "Mr.",  "Mrs.", "Ms.",  "Dr.",   "Prof.",
      "Sen.", "Rep.", "Gov.", "Gen.", "Lt.",  "Col.", "Jr.",   "Sr.",
      "St.",  "No.",  "vs.",  "Inc.", "Co.",  "Corp.", "Mt.", "Ft."};
  return kAbbreviations;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<Span> split_sentences(std::string_view text,
                                  const std::vector<std::string>& abbreviations) {
  std::vector<Span> out;
  const std::size_t n = text.size();
  auto skip_space = [&](std::size_t p) {
    while (p < n && is_space(text[p])) ++p;
    return p;
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && is_terminator(text[end])) ++end;
    const bool single_period = text[i] == '.' && end == i + 1;
    while (end < n && closer_length(text, end) > 0) end += closer_length(text, end);

    const std::size_t next = skip_space(end);
    bool boundary = false;
    if (next == n) {
      boundary = true;
    } else if (next > end) {
      std::size_t p = next;
      while (p < n && opener_length(text, p) > 0) p += opener_length(text, p);
      boundary = p < n && std::isupper(static_cast<unsigned char>(text[p])) &&
                 !(single_period && protected_period(text, i, abbreviations));
    }
    if (boundary) {
      out.push_back({start, end});
      start = next;
    }
    i = boundary ? next : end;
  }
  if (start < n) {
    std::size_t e = n;
    while (e > start && is_space(text[e - 1])) --e;
    out.push_back({start, e});
  }
  return out;
}

std::vector<Span> token_spans(std::string_view text) {
  std::vector<Span> out;
  std::size_t pos = 0;
  std::size_t token_start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    std::size_t len = 1;
    const char32_t cp = decode(text, pos, len);
    const bool word = is_word_codepoint(cp);
    if (word && !in_token) {
      token_start = pos;
      in_token = true;
    } else if (!word && in_token) {
      out.push_back({token_start, pos});
      in_token = false;
    }
    pos += len;
  }
  if (in_token) out.push_back({token_start, text.size()});
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const Span& s : token_spans(text)) {
    std::string tok(s.of(text));
    for (char& c : tok) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::size_t estimate_subwords(std::size_t token_count, double calibration) {
  if (!(calibration > 0.0)) {
    throw DataError("subword calibration must be positive");
  }
  // The product of an exact count and a decimal ratio lands a hair above
  // the integer it represents (100 * 1.35), so round away that noise.
  const double scaled = static_cast<double>(token_count) * calibration;
  return static_cast<std::size_t>(std::ceil(scaled - 1e-9));
}

std::size_t estimate_subwords(std::string_view text, double calibration) {
  return estimate_subwords(token_spans(text).size(), calibration);
}

std::vector<std::string> SegmentedDoc::sentence_texts() const {
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const Span& s : sentences) out.emplace_back(s.of(text));
  return out;
}

std::vector<std::string> SegmentedDoc::words() const { return tokenize(text); }

SegmentedDoc segment(std::string text, const SegmenterOptions& options) {
  SegmentedDoc doc;
  doc.text = std::move(text);
  doc.sentences = split_sentences(doc.text, options.abbreviations);
  doc.tokens = token_spans(doc.text);
  doc.subword_estimate = std::max(doc.tokens.size(),
                                  estimate_subwords(doc.tokens.size(),
                                                    options.subword_calibration));
  return doc;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace vf
