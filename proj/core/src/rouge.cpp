#include "vf/rouge.hpp"

#include <algorithm>
#include <unordered_map>

#include "vf/error.hpp"

namespace vf {

const char* to_string(RougeVariant v) {
  switch (v) {
    case RougeVariant::r1:
      return "R1";
    case RougeVariant::r2:
      return "R2";
    case RougeVariant::rl:
      return "RL";
  }
  return "?";
}

double f_measure(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

namespace {

// n-grams are keyed by their tokens joined with a unit separator.
std::unordered_map<std::string, std::size_t> count_ngrams(std::span<const std::string> tokens,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

RougeScore make_score(RougeVariant v, double overlap, std::size_t cand_total,
                      std::size_t ref_total) {
  RougeScore s{v};
  if (cand_total == 0 || ref_total == 0) return s;
  s.precision = overlap / static_cast<double>(cand_total);
  s.recall = overlap / static_cast<double>(ref_total);
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n) {
  if (n < 1) throw UsageError("ROUGE-N requires n >= 1");
  const auto order = static_cast<std::size_t>(n);
  const auto cand = count_ngrams(candidate, order);
  const auto ref = count_ngrams(reference, order);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : ref) {
    auto it = cand.find(gram);
    if (it != cand.end()) overlap += std::min(count, it->second);
  }
  const auto total = [order](std::span<const std::string> t) {
    return t.size() >= order ? t.size() - order + 1 : 0;
  };
  const RougeVariant v = n == 1 ? RougeVariant::r1 : RougeVariant::r2;
  return make_score(v, static_cast<double>(overlap), total(candidate), total(reference));
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  // Single row over the shorter sequence.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row.back();
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  return make_score(RougeVariant::rl, static_cast<double>(lcs_length(candidate, reference)),
                    candidate.size(), reference.size());
}

RougeScore aggregate(std::span<const RougeScore> scores) {
  if (scores.empty()) throw DataError("cannot aggregate an empty score list");
  RougeScore out{scores.front().variant};
  for (const auto& s : scores) {
    if (s.variant != out.variant) throw DataError("cannot aggregate mixed ROUGE variants");
    out.precision += s.precision;
    out.recall += s.recall;
    out.f1 += s.f1;
  }
  const auto n = static_cast<double>(scores.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

const RougeScore& RougeTriplet::get(RougeVariant v) const {
  switch (v) {
    case RougeVariant::r1:
      return r1;
    case RougeVariant::r2:
      return r2;
    case RougeVariant::rl:
      break;
  }
  return rl;
}

RougeTriplet rouge_all(std::span<const std::string> candidate,
                       std::span<const std::string> reference) {
  return {rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2),
          rouge_l(candidate, reference)};
}

RougeTriplet aggregate(std::span<const RougeTriplet> scores) {
  if (scores.empty()) throw DataError("cannot aggregate an empty score list");
  std::vector<RougeScore> r1, r2, rl;
  for (const auto& s : scores) {
    r1.push_back(s.r1);
    r2.push_back(s.r2);
    rl.push_back(s.rl);
  }
  return {aggregate(r1), aggregate(r2), aggregate(rl)};
}

}  // namespace vf
