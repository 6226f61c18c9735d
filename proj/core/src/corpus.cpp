#include "vf/corpus.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "vf/error.hpp"

namespace vf {

using nlohmann::json;

const char* to_string(Field f) {
  switch (f) {
    case Field::claim:
      return "claim";
    case Field::article:
      return "article";
    case Field::verdict:
      return "verdict";
  }
  return "?";
}

Field parse_field(const std::string& name) {
  if (name == "claim") return Field::claim;
  if (name == "article") return Field::article;
  if (name == "verdict") return Field::verdict;
  throw DataError("unknown field '" + name + "'");
}

const SegmentedDoc& SegmentedTriple::get(Field f) const {
  switch (f) {
    case Field::claim:
      return claim;
    case Field::article:
      return article;
    case Field::verdict:
      break;
  }
  return verdict;
}

SegmentedDoc& SegmentedTriple::get(Field f) {
  return const_cast<SegmentedDoc&>(std::as_const(*this).get(f));
}

Corpus::Corpus(std::string name, std::vector<Triple> triples, SegmenterOptions options)
    : name_(std::move(name)), triples_(std::move(triples)), options_(std::move(options)) {
  segmented_.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    for (Field f : {Field::claim, Field::article, Field::verdict}) {
      const std::string& text =
          f == Field::claim ? t.claim : (f == Field::article ? t.article : t.verdict);
      if (trim(text).empty()) {
        throw DataError("triple '" + t.id + "': empty " + to_string(f));
      }
    }
    if (!index_.emplace(t.id, i).second) {
      throw DataError("duplicate id '" + t.id + "'");
    }
    segmented_.push_back({segment(t.claim, options_), segment(t.article, options_),
                          segment(t.verdict, options_)});
  }
}

std::optional<std::size_t> Corpus::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Corpus::dataset_tag() const {
  std::set<std::string> tags;
  for (const auto& t : triples_) tags.insert(t.dataset);
  return tags.size() == 1 ? *tags.begin() : name_;
}

void Corpus::apply_subword_counts(
    const std::map<std::pair<std::string, Field>, std::size_t>& counts) {
  for (const auto& [key, count] : counts) {
    auto pos = find(key.first);
    if (!pos) throw DataError("subword count for unknown id '" + key.first + "'");
    segmented_[*pos].get(key.second).subword_estimate = count;
  }
}

Corpus Corpus::subset(std::string name, const std::vector<std::size_t>& indices) const {
  Corpus out;
  out.name_ = std::move(name);
  out.options_ = options_;
  for (std::size_t i : indices) {
    out.index_.emplace(triples_.at(i).id, out.triples_.size());
    out.triples_.push_back(triples_[i]);
    out.segmented_.push_back(segmented_[i]);
  }
  return out;
}

namespace {

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw DataError("line " + std::to_string(line) + ": field '" + key + "' is not a string");
  }
  return it->get<std::string>();
}

std::string mandatory_string(const json& obj, const char* key, std::size_t line) {
  auto value = optional_string(obj, key, line);
  if (!value) {
    throw DataError("line " + std::to_string(line) + ": missing field '" + key + "'");
  }
  if (trim(*value).empty()) {
    throw DataError("line " + std::to_string(line) + ": empty field '" + key + "'");
  }
  return *value;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const SegmenterOptions& options) {
  if (format != CorpusFormat::jsonl) throw UsageError("unsupported corpus format");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");

  const std::string default_dataset = path.stem().string();
  std::vector<Triple> triples;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) {
      throw DataError("line " + std::to_string(line_no) + ": record is not an object");
    }
    Triple t;
    t.claim = mandatory_string(obj, "claim", line_no);
    t.article = mandatory_string(obj, "article", line_no);
    t.verdict = mandatory_string(obj, "verdict", line_no);
    t.dataset = optional_string(obj, "dataset", line_no).value_or(default_dataset);
    t.truth_label = optional_string(obj, "truth_label", line_no);
    if (auto id = optional_string(obj, "id", line_no)) {
      t.id = *id;
    } else if (obj.contains("id") && obj["id"].is_number_integer()) {
      t.id = std::to_string(obj["id"].get<long long>());
    } else {
      t.id = t.dataset + "-" + std::to_string(line_no);
    }
    if (!seen.insert(t.id).second) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate id '" + t.id + "'");
    }
    triples.push_back(std::move(t));
  }
  return Corpus(default_dataset, std::move(triples), options);
}

std::map<std::pair<std::string, Field>, std::size_t> load_subword_counts(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open subword counts '" + path.string() + "'");
  std::map<std::pair<std::string, Field>, std::size_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json obj = json::parse(line);
      const auto count = obj.at("count").get<long long>();
      if (count < 0) throw DataError("negative count");
      out[{obj.at("id").get<std::string>(), parse_field(obj.at("field").get<std::string>())}] =
          static_cast<std::size_t>(count);
    } catch (const std::exception& e) {
      throw DataError("subword counts line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Unbiased draw in [0, i) by rejection.
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(perm[i - 1], perm[r % bound]);
  }
  return perm;
}

CorpusSplit split_dataset(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.val > 0 && ratios.test > 0) ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw UsageError("split ratios must be positive and sum to 1");
  }
  const std::size_t n = corpus.size();
  if (n < 3) throw DataError("corpus '" + corpus.name() + "' is too small to split");

  const auto part = [n](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_val = part(ratios.val);
  const std::size_t n_test = part(ratios.test);
  const std::size_t n_train = n - n_val - n_test;

  const auto perm = seeded_permutation(n, seed);
  auto slice = [&](std::size_t from, std::size_t count) {
    return std::vector<std::size_t>(perm.begin() + static_cast<std::ptrdiff_t>(from),
                                    perm.begin() + static_cast<std::ptrdiff_t>(from + count));
  };
  return {corpus.subset(corpus.name() + "/train", slice(0, n_train)),
          corpus.subset(corpus.name() + "/val", slice(n_train, n_val)),
          corpus.subset(corpus.name() + "/test", slice(n_train + n_val, n_test))};
}

}  // namespace vf
