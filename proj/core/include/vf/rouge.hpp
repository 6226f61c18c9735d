#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vf {

enum class RougeVariant { r1, r2, rl };

const char* to_string(RougeVariant v);

struct RougeScore {
  RougeVariant variant = RougeVariant::r1;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using Tokens = std::vector<std::string>;

/// Harmonic mean of precision and recall; 0 when both are 0.
double f_measure(double precision, double recall);

/// Clipped n-gram overlap. Recall is against the reference n-gram count,
/// precision against the candidate's. Texts with no n-grams score zero.
/// The variant tag is R1 for n == 1 and R2 for every larger n.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n);

/// Summary-level ROUGE-L over the flattened token sequences.
RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

/// Longest common subsequence length; O(|a||b|) time, O(min(|a|,|b|)) memory.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Mean of precision, recall and f1 taken independently. Throws DataError
/// on an empty list or mixed variants.
RougeScore aggregate(std::span<const RougeScore> scores);

/// R1, R2 and RL for one candidate/reference pair.
struct RougeTriplet {
  RougeScore r1{RougeVariant::r1};
  RougeScore r2{RougeVariant::r2};
  RougeScore rl{RougeVariant::rl};

  const RougeScore& get(RougeVariant v) const;
};

RougeTriplet rouge_all(std::span<const std::string> candidate,
                       std::span<const std::string> reference);

/// Aggregates each variant separately.
RougeTriplet aggregate(std::span<const RougeTriplet> scores);

}  // namespace vf
