#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "support/test_paths.hpp"
#include "vf/analysis.hpp"
#include "vf/error.hpp"

using namespace vf;
using nlohmann::json;

namespace {

const char* metric_name(RougeVariant v) {
  switch (v) {
    case RougeVariant::r1:
      return "R1";
    case RougeVariant::r2:
      return "R2";
    case RougeVariant::rl:
      return "RL";
  }
  return "";
}

void check_against_manifest(const AnalysisReport& report, const json& manifest) {
  for (auto f : {Field::article, Field::claim, Field::verdict}) {
    const auto& expected = manifest["lengths"][to_string(f)];
    const auto& got = report.lengths.get(f);
    CHECK(std::abs(got.mean_sentences - expected["sentences"].get<double>()) <= 1e-9);
    CHECK(std::abs(got.mean_tokens - expected["tokens"].get<double>()) <= 1e-9);
    CHECK(std::abs(got.mean_subwords - expected["subwords"].get<double>()) <= 1e-9);
  }
  for (const auto& b : report.lengths.article_over_budget) {
    CHECK(std::abs(b.fraction - manifest["over_budget"][std::to_string(b.budget)].get<double>()) <=
          1e-9);
  }
  REQUIRE(report.overlaps.size() == 9);
  for (const auto& o : report.overlaps) {
    const std::string key = std::string(to_string(o.pair)) + "/" + to_string(o.variant);
    INFO(key);
    const auto& expected = manifest["overlaps"][key];
    for (auto v : {RougeVariant::r1, RougeVariant::r2, RougeVariant::rl}) {
      const std::string m = metric_name(v);
      const auto& s = o.mean.get(v);
      CHECK(std::abs(s.recall - expected[m + "_recall"].get<double>()) <= 1e-9);
      CHECK(std::abs(s.precision - expected[m + "_precision"].get<double>()) <= 1e-9);
      CHECK(std::abs(s.f1 - expected[m + "_f1"].get<double>()) <= 1e-9);
    }
    CHECK(o.scored == expected["scored"].get<std::size_t>());
    CHECK(o.excluded == expected["excluded"].get<std::size_t>());
  }
}

Corpus tiny(const std::string& claim, const std::string& article, const std::string& verdict) {
  return Corpus("tiny", {{"t1", "tiny", claim, article, verdict, std::nullopt}});
}

}  // namespace

TEST_CASE("analysis fixture matches the independent manifest") {
  const auto corpus = load_corpus(testing::fixture("analysis12.jsonl"));
  const auto manifest = json::parse(testing::read_file(testing::fixture("analysis12_manifest.json")));
  check_against_manifest(analyze(corpus), manifest);
}

TEST_CASE("claim-heavy fixture matches its manifest") {
  const auto corpus = load_corpus(testing::fixture("lpp_style.jsonl"));
  const auto manifest = json::parse(testing::read_file(testing::fixture("lpp_style_manifest.json")));
  check_against_manifest(analyze(corpus), manifest);
}

TEST_CASE("overlap extremes") {
  const auto contained = tiny("Rates rose.", "Officials spoke. Rates rose. Then they left.",
                              "Rates rose last year, records show.");
  const auto ca = overlap_stats(contained, PairKind::claim_article, AblationVariant::complete);
  CHECK(ca.mean.rl.recall == 1.0);
  CHECK(ca.mean.r1.recall == 1.0);

  const auto disjoint = tiny("Apples fell.", "Zebras ran quickly.", "Bridges were built.");
  for (auto pair : {PairKind::verdict_article, PairKind::claim_verdict, PairKind::claim_article}) {
    const auto s = overlap_stats(disjoint, pair, AblationVariant::complete);
    CHECK(s.mean.r1.f1 == 0.0);
    CHECK(s.mean.r2.f1 == 0.0);
    CHECK(s.mean.rl.f1 == 0.0);
  }
}

TEST_CASE("removing the container sentence holding the claim lowers recall") {
  const auto first = tiny("Wages doubled in March.", "Wages doubled in March. Analysts were cautious.",
                          "Wages doubled in March. Other data disagree.");
  const auto complete = overlap_stats(first, PairKind::claim_verdict, AblationVariant::complete);
  const auto no_first = overlap_stats(first, PairKind::claim_verdict, AblationVariant::no_first);
  const auto no_last = overlap_stats(first, PairKind::claim_verdict, AblationVariant::no_last);
  CHECK(complete.mean.r1.recall == 1.0);
  CHECK(no_first.mean.r1.recall < complete.mean.r1.recall);
  CHECK(no_last.mean.r1.recall == complete.mean.r1.recall);
}

TEST_CASE("single-sentence containers are excluded by ablation") {
  const auto one = tiny("Wages doubled.", "Wages doubled.", "Wages doubled, it says.");
  const auto ablated = analyze(Corpus("x", {{"a", "x", "Rates rose.", "One. Two.", "Only one.", {}},
                                            {"b", "x", "Rates rose.", "One. Two.", "Two here. Yes.", {}}}));
  bool saw_exclusion = false;
  for (const auto& o : ablated.overlaps) {
    if (o.pair == PairKind::claim_verdict && o.variant != AblationVariant::complete) {
      CHECK(o.excluded == 1);
      CHECK(o.scored == 1);
      saw_exclusion = true;
    }
  }
  CHECK(saw_exclusion);
  CHECK_THROWS_AS(overlap_stats(one, PairKind::claim_verdict, AblationVariant::no_first), DataError);
}

TEST_CASE("ablated_tokens") {
  const auto doc = segment("Alpha beta. Gamma. Delta epsilon.");
  CHECK(ablated_tokens(doc, AblationVariant::complete).size() == 5);
  CHECK(ablated_tokens(doc, AblationVariant::no_first) == Tokens{"gamma", "delta", "epsilon"});
  CHECK(ablated_tokens(doc, AblationVariant::no_last) == Tokens{"alpha", "beta", "gamma"});
  CHECK(ablated_tokens(segment("Only."), AblationVariant::no_last).empty());
}

TEST_CASE("length statistics") {
  const auto corpus = Corpus("x", {{"a", "x", "C here.", "One two. Three.", "V.", {}},
                                   {"b", "x", "C here.", "One two three four. Five. Six.", "V.", {}}});
  const auto s = length_stats(corpus, {6});
  CHECK(s.get(Field::article).mean_sentences == 2.5);
  CHECK(s.get(Field::article).mean_tokens == 4.5);
  REQUIRE(s.article_over_budget.size() == 1);
  CHECK(s.article_over_budget[0].fraction == 0.5);
  CHECK_THROWS_AS(length_stats(Corpus()), DataError);
}

TEST_CASE("report CSV shape, round trip and determinism") {
  const auto corpus = load_corpus(testing::fixture("analysis12.jsonl"));
  const auto report = analyze(corpus);
  const auto csv = report_csv(report);
  CHECK(csv.rfind("table,dataset,variant,metric,value\n", 0) == 0);

  std::set<std::string> length_groups;
  std::set<std::string> overlap_groups;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const auto table = line.substr(0, c1);
    const auto variant = line.substr(c2 + 1, c3 - c2 - 1);
    (table == "lengths" ? length_groups : overlap_groups).insert(table + "/" + variant);
  }
  CHECK(length_groups.size() == 3);
  CHECK(overlap_groups.size() == 9);

  const auto parsed = parse_report_csv(csv);
  CHECK(report_csv(parsed) == csv);
  CHECK(report_csv(analyze(corpus)) == csv);
  CHECK_THROWS_AS(parse_report_csv("nonsense"), DataError);

  testing::TempDir a;
  testing::TempDir b;
  vf::report(corpus, a.path() / "out");
  vf::report(corpus, b.path());
  CHECK(testing::read_file(a.path() / "out" / "analysis.csv") == csv);
  CHECK(testing::read_file(a.path() / "out" / "analysis.md") ==
        testing::read_file(b.path() / "analysis.md"));
  const auto md = testing::read_file(b.path() / "analysis.md");
  CHECK(md.find("tokenizer=lowercase-alnum") != std::string::npos);
}
