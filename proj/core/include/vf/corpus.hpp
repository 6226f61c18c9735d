#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vf/text.hpp"

namespace vf {

/// One claim/article/verdict record.
struct Triple {
  std::string id;
  std::string dataset;
  std::string claim;
  std::string article;
  std::string verdict;
  std::optional<std::string> truth_label;
};

enum class Field { claim, article, verdict };

const char* to_string(Field f);
Field parse_field(const std::string& name);

struct SegmentedTriple {
  SegmentedDoc claim;
  SegmentedDoc article;
  SegmentedDoc verdict;

  const SegmentedDoc& get(Field f) const;
  SegmentedDoc& get(Field f);
};

/// Validated triples plus their segmentation, computed once at construction.
/// Immutable after construction.
class Corpus {
 public:
  Corpus() = default;
  /// Validates and segments. Throws DataError on an empty mandatory field or
  /// a duplicate id.
  Corpus(std::string name, std::vector<Triple> triples, SegmenterOptions options = {});

  const std::string& name() const { return name_; }
  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<SegmentedTriple>& segmented() const { return segmented_; }
  const SegmenterOptions& segmenter() const { return options_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  const Triple& at(std::size_t i) const { return triples_.at(i); }
  const SegmentedTriple& segmented(std::size_t i) const { return segmented_.at(i); }
  /// Position of `id`, or nullopt.
  std::optional<std::size_t> find(const std::string& id) const;

  /// Dataset tag shared by every triple, or the corpus name when mixed.
  std::string dataset_tag() const;

  /// Replaces subword estimates with exact counts keyed by (id, field).
  /// Unknown ids are a DataError.
  void apply_subword_counts(const std::map<std::pair<std::string, Field>, std::size_t>& counts);

  /// Sub-corpus of the triples at `indices`, reusing their segmentation.
  Corpus subset(std::string name, const std::vector<std::size_t>& indices) const;

 private:
  std::string name_;
  std::vector<Triple> triples_;
  std::vector<SegmentedTriple> segmented_;
  std::map<std::string, std::size_t> index_;
  SegmenterOptions options_;
};

enum class CorpusFormat { jsonl };

/// Loads a JSONL corpus: one object per line with `claim`, `article`,
/// `verdict` and optional `id`, `dataset`, `truth_label`. Blank lines are
/// skipped. Missing datasets default to the file stem; missing ids become
/// "<dataset>-<line number>". Errors name the 1-based line.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::jsonl,
                   const SegmenterOptions& options = {});

/// Reads a sidecar of `{id, field, count}` lines.
std::map<std::pair<std::string, Field>, std::size_t> load_subword_counts(
    const std::filesystem::path& path);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  Corpus train;
  Corpus val;
  Corpus test;
};

/// Seeded shuffle then partition. Validation and test sizes are
/// floor(n * ratio); the remainder goes to train.
CorpusSplit split_dataset(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed);

/// Fisher-Yates permutation of 0..n-1 driven by mt19937_64; identical on
/// every platform for the same seed.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace vf
