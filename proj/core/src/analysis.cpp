#include "vf/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "vf/error.hpp"

namespace vf {

namespace {

constexpr PairKind kPairs[] = {PairKind::verdict_article, PairKind::claim_verdict,
                               PairKind::claim_article};
constexpr AblationVariant kVariants[] = {AblationVariant::complete, AblationVariant::no_first,
                                         AblationVariant::no_last};
constexpr Field kElements[] = {Field::article, Field::claim, Field::verdict};

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

const ElementLength& LengthStats::get(Field f) const {
  for (const auto& e : elements) {
    if (e.element == f) return e;
  }
  throw DataError(std::string("no length stats for ") + to_string(f));
}

const char* to_string(PairKind p) {
  switch (p) {
    case PairKind::verdict_article:
      return "verdict_article";
    case PairKind::claim_verdict:
      return "claim_verdict";
    case PairKind::claim_article:
      return "claim_article";
  }
  return "?";
}

const char* to_string(AblationVariant v) {
  switch (v) {
    case AblationVariant::complete:
      return "complete";
    case AblationVariant::no_first:
      return "no_first";
    case AblationVariant::no_last:
      return "no_last";
  }
  return "?";
}

PairKind parse_pair_kind(const std::string& s) {
  for (PairKind p : kPairs) {
    if (s == to_string(p)) return p;
  }
  throw DataError("unknown pair kind '" + s + "'");
}

AblationVariant parse_ablation(const std::string& s) {
  for (AblationVariant v : kVariants) {
    if (s == to_string(v)) return v;
  }
  throw DataError("unknown ablation variant '" + s + "'");
}

Field reference_field(PairKind p) {
  return p == PairKind::verdict_article ? Field::verdict : Field::claim;
}

Field container_field(PairKind p) {
  return p == PairKind::claim_verdict ? Field::verdict : Field::article;
}

LengthStats length_stats(const Corpus& corpus, const std::vector<std::size_t>& budgets) {
  if (corpus.empty()) throw DataError("length statistics need a non-empty corpus");
  LengthStats stats;
  stats.dataset = corpus.dataset_tag();
  const auto n = static_cast<double>(corpus.size());
  for (Field f : kElements) {
    ElementLength e{f};
    for (const auto& seg : corpus.segmented()) {
      const SegmentedDoc& doc = seg.get(f);
      e.mean_sentences += static_cast<double>(doc.sentence_count());
      e.mean_tokens += static_cast<double>(doc.token_count());
      e.mean_subwords += static_cast<double>(doc.subword_estimate);
    }
    e.mean_sentences /= n;
    e.mean_tokens /= n;
    e.mean_subwords /= n;
    stats.elements.push_back(e);
  }
  for (std::size_t budget : budgets) {
    std::size_t over = 0;
    for (const auto& seg : corpus.segmented()) {
      if (seg.article.subword_estimate > budget) ++over;
    }
    stats.article_over_budget.push_back({budget, static_cast<double>(over) / n});
  }
  return stats;
}

Tokens ablated_tokens(const SegmentedDoc& doc, AblationVariant variant) {
  const auto& s = doc.sentences;
  switch (variant) {
    case AblationVariant::complete:
      return doc.words();
    case AblationVariant::no_first:
      if (s.size() <= 1) return {};
      return tokenize(std::string_view(doc.text).substr(s[1].start));
    case AblationVariant::no_last:
      if (s.size() <= 1) return {};
      return tokenize(std::string_view(doc.text).substr(0, s[s.size() - 2].end));
  }
  return {};
}

OverlapStats overlap_stats(const Corpus& corpus, PairKind pair, AblationVariant variant) {
  if (corpus.empty()) throw DataError("overlap statistics need a non-empty corpus");
  OverlapStats stats;
  stats.dataset = corpus.dataset_tag();
  stats.pair = pair;
  stats.variant = variant;
  std::vector<RougeTriplet> scores;
  for (const auto& seg : corpus.segmented()) {
    const Tokens reference = seg.get(reference_field(pair)).words();
    const Tokens container = ablated_tokens(seg.get(container_field(pair)), variant);
    if (container.empty()) {
      ++stats.excluded;
      continue;
    }
    scores.push_back(rouge_all(container, reference));
  }
  if (scores.empty()) {
    throw DataError(std::string("every triple was excluded from ") + to_string(pair) + "/" +
                    to_string(variant));
  }
  stats.scored = scores.size();
  stats.mean = aggregate(scores);
  return stats;
}

AnalysisReport analyze(const Corpus& corpus, const std::vector<std::size_t>& budgets) {
  AnalysisReport out;
  out.lengths = length_stats(corpus, budgets);
  for (PairKind p : kPairs) {
    for (AblationVariant v : kVariants) out.overlaps.push_back(overlap_stats(corpus, p, v));
  }
  return out;
}

std::string text_config_fingerprint(const SegmenterOptions& options) {
  std::ostringstream os;
  os << "tokenizer=lowercase-alnum;stemming=none;stopwords=none;lcs=summary-level;"
     << "segmenter=rule-v1(" << options.abbreviations.size() << " abbreviations);"
     << "subword_calibration=" << exact(options.subword_calibration);
  return os.str();
}

std::string report_csv(const AnalysisReport& report) {
  std::ostringstream os;
  os << "table,dataset,variant,metric,value\n";
  const auto& ds = report.lengths.dataset;
  for (const auto& e : report.lengths.elements) {
    const std::string prefix = std::string("lengths,") + ds + "," + to_string(e.element) + ",";
    os << prefix << "sentences," << exact(e.mean_sentences) << "\n";
    os << prefix << "tokens," << exact(e.mean_tokens) << "\n";
    os << prefix << "subwords," << exact(e.mean_subwords) << "\n";
    if (e.element == Field::article) {
      for (const auto& b : report.lengths.article_over_budget) {
        os << prefix << "over_" << b.budget << "," << exact(b.fraction) << "\n";
      }
    }
  }
  for (const auto& o : report.overlaps) {
    const std::string prefix = std::string(to_string(o.pair)) + "," + o.dataset + "," +
                               to_string(o.variant) + ",";
    for (RougeVariant v : {RougeVariant::r1, RougeVariant::r2, RougeVariant::rl}) {
      const RougeScore& s = o.mean.get(v);
      os << prefix << to_string(v) << "_recall," << exact(s.recall) << "\n";
      os << prefix << to_string(v) << "_precision," << exact(s.precision) << "\n";
      os << prefix << to_string(v) << "_f1," << exact(s.f1) << "\n";
    }
    os << prefix << "scored," << o.scored << "\n";
    os << prefix << "excluded," << o.excluded << "\n";
  }
  return os.str();
}

AnalysisReport parse_report_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "table,dataset,variant,metric,value") {
    throw DataError("analysis CSV lacks its header line");
  }
  AnalysisReport out;
  std::map<std::pair<std::string, std::string>, std::size_t> overlap_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 5) {
      throw DataError("analysis CSV line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const auto& [table, dataset, variant, metric, text] =
        std::tie(cols[0], cols[1], cols[2], cols[3], cols[4]);
    double value = 0.0;
    try {
      value = std::stod(text);
    } catch (const std::exception&) {
      throw DataError("analysis CSV line " + std::to_string(line_no) + ": bad value");
    }
    if (table == "lengths") {
      out.lengths.dataset = dataset;
      const Field f = parse_field(variant);
      auto it = std::find_if(out.lengths.elements.begin(), out.lengths.elements.end(),
                             [f](const ElementLength& e) { return e.element == f; });
      if (it == out.lengths.elements.end()) {
        out.lengths.elements.push_back({f});
        it = std::prev(out.lengths.elements.end());
      }
      if (metric == "sentences") {
        it->mean_sentences = value;
      } else if (metric == "tokens") {
        it->mean_tokens = value;
      } else if (metric == "subwords") {
        it->mean_subwords = value;
      } else if (metric.rfind("over_", 0) == 0) {
        out.lengths.article_over_budget.push_back(
            {static_cast<std::size_t>(std::stoull(metric.substr(5))), value});
      } else {
        throw DataError("analysis CSV line " + std::to_string(line_no) + ": unknown metric");
      }
      continue;
    }
    const auto key = std::make_pair(table, variant);
    auto [it, inserted] = overlap_index.emplace(key, out.overlaps.size());
    if (inserted) {
      OverlapStats o;
      o.dataset = dataset;
      o.pair = parse_pair_kind(table);
      o.variant = parse_ablation(variant);
      out.overlaps.push_back(o);
    }
    OverlapStats& o = out.overlaps[it->second];
    if (metric == "scored") {
      o.scored = static_cast<std::size_t>(value);
      continue;
    }
    if (metric == "excluded") {
      o.excluded = static_cast<std::size_t>(value);
      continue;
    }
    const auto underscore = metric.find('_');
    const std::string v = metric.substr(0, underscore);
    const std::string kind = underscore == std::string::npos ? "" : metric.substr(underscore + 1);
    RougeScore* score = v == "R1" ? &o.mean.r1 : v == "R2" ? &o.mean.r2 : v == "RL" ? &o.mean.rl
                                                                                   : nullptr;
    if (score == nullptr) {
      throw DataError("analysis CSV line " + std::to_string(line_no) + ": unknown metric");
    }
    if (kind == "recall") {
      score->recall = value;
    } else if (kind == "precision") {
      score->precision = value;
    } else if (kind == "f1") {
      score->f1 = value;
    } else {
      throw DataError("analysis CSV line " + std::to_string(line_no) + ": unknown metric");
    }
  }
  return out;
}

std::string report_markdown(const AnalysisReport& report, const Corpus& corpus) {
  std::ostringstream os;
  os << "# Corpus analysis: " << report.lengths.dataset << "\n\n";
  os << "- triples: " << corpus.size() << "\n";
  os << "- configuration: `" << text_config_fingerprint(corpus.segmenter()) << "`\n";
  os << "- overlap orientation: the first text of each pair is the ROUGE reference "
        "(recall = share of it found in the second text)\n\n";

  os << "## Lengths\n\n| element | SENT | TOK | SUBWORD |\n|---|---|---|---|\n";
  for (const auto& e : report.lengths.elements) {
    os << "| " << to_string(e.element) << " | " << fixed3(e.mean_sentences) << " | "
       << fixed3(e.mean_tokens) << " | " << fixed3(e.mean_subwords) << " |\n";
  }
  os << "\n";
  for (const auto& b : report.lengths.article_over_budget) {
    os << "- articles above " << b.budget << " subwords: " << fixed3(b.fraction) << "\n";
  }

  for (PairKind p : kPairs) {
    os << "\n## Overlap " << to_string(p) << " (ablation on " << to_string(container_field(p))
       << ")\n\n| variant | R1 rec | R2 rec | RL rec | R1 F1 | R2 F1 | RL F1 | scored | excluded |\n"
       << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& o : report.overlaps) {
      if (o.pair != p) continue;
      os << "| " << to_string(o.variant) << " | " << fixed3(o.mean.r1.recall) << " | "
         << fixed3(o.mean.r2.recall) << " | " << fixed3(o.mean.rl.recall) << " | "
         << fixed3(o.mean.r1.f1) << " | " << fixed3(o.mean.r2.f1) << " | "
         << fixed3(o.mean.rl.f1) << " | " << o.scored << " | " << o.excluded << " |\n";
    }
  }
  return os.str();
}

AnalysisReport report(const Corpus& corpus, const std::filesystem::path& out_dir) {
  AnalysisReport result = analyze(corpus);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  const auto write = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write '" + path.string() + "'");
  };
  write(out_dir / "analysis.csv", report_csv(result));
  write(out_dir / "analysis.md", report_markdown(result, corpus));
  return result;
}

}  // namespace vf
