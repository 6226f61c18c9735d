#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "support/test_paths.hpp"
#include "vf/corpus.hpp"
#include "vf/error.hpp"
#include "vf/extractive.hpp"

using namespace vf;

namespace {

ExtractConfig config(Method m, std::size_t k, Selection s = Selection::top,
                     Ordering o = Ordering::article) {
  ExtractConfig c;
  c.method = m;
  c.k = k;
  c.selection = s;
  c.ordering = o;
  return c;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("enum names round-trip") {
  for (auto m : {Method::truncation, Method::lexrank, Method::claimdriven}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(parse_method("sbert") == Method::claimdriven);
  CHECK(parse_selection("tail") == Selection::bottom);
  CHECK(parse_ordering("ranking") == Ordering::ranking);
  CHECK_THROWS_AS(parse_method("textrank"), UsageError);
  CHECK_THROWS_AS(parse_selection("middle"), UsageError);
  CHECK_THROWS_AS(parse_ordering("random"), UsageError);
}

TEST_CASE("config validation") {
  auto c = config(Method::lexrank, 0);
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.k = 3;
  c.lexrank.damping = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.lexrank.damping = 0.85;
  CHECK_NOTHROW(c.validate());
  c.k.reset();
  CHECK(c.k_label() == "auto");
}

TEST_CASE("truncation head, tail and clamping") {
  const auto article = segment("One. Two. Three. Four. Five.");
  const auto claim = segment("A claim.");
  const auto head = extract(article, claim, config(Method::truncation, 2), {});
  CHECK(head.indices == std::vector<std::size_t>{0, 1});
  CHECK(head.text == "One. Two.");
  const auto tail = extract(article, claim, config(Method::truncation, 2, Selection::bottom), {});
  CHECK(tail.indices == std::vector<std::size_t>{3, 4});
  const auto tail_ranked = extract(article, claim,
                                   config(Method::truncation, 2, Selection::bottom, Ordering::ranking), {});
  CHECK(tail_ranked.indices == tail.indices);
  const auto all = extract(article, claim, config(Method::truncation, 50), {});
  CHECK(all.text == article.text);
}

TEST_CASE("lexrank closed forms") {
  CHECK(lexrank_scores({{1.0}}) == std::vector<double>{1.0});

  const auto twin = rank_lexrank(segment("Prices rose sharply. Prices rose sharply."));
  CHECK(twin.scores[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(twin.scores[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(twin.order == std::vector<std::size_t>{0, 1});

  // All-zero similarity rows become uniform: scores stay uniform.
  const auto flat = lexrank_scores({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  for (double x : flat) CHECK(x == doctest::Approx(1.0 / 3.0));

  // Identical sentences tie; ties go to the earlier sentence.
  const auto same = rank_lexrank(segment("Tax is up. Tax is up. Tax is up. Tax is up."));
  CHECK(same.order == std::vector<std::size_t>{0, 1, 2, 3});
  for (double x : same.scores) CHECK(x == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("lexrank matches a direct linear solve") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto article = segment(oracle::random_article(rng, 8 + trial % 5));
    std::vector<oracle::Tokens> sentences;
    for (std::size_t i = 0; i < article.sentence_count(); ++i) {
      sentences.push_back(tokenize(article.sentence(i)));
    }
    const auto sim = sentence_similarity(article);
    const auto expected_sim = oracle::tfidf_cosine(sentences);
    for (std::size_t i = 0; i < sim.size(); ++i) {
      for (std::size_t j = 0; j < sim.size(); ++j) {
        CHECK(sim[i][j] == doctest::Approx(expected_sim[i][j]).epsilon(1e-12));
      }
    }
    const auto scores = lexrank_scores(sim);
    const auto expected = oracle::stationary_distribution(expected_sim, 0.85);
    CHECK(sum(scores) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < scores.size(); ++i) {
      CHECK(std::abs(scores[i] - expected[i]) <= 1e-5);
      CHECK(scores[i] > 0.0);
    }
  }
}

TEST_CASE("lexrank ranks the planted central sentence first") {
  const auto article = segment(
      "Budget tax school record. Weather is mild today. Budget tax school record vote. "
      "Budget tax school. A lone heron flew.");
  const auto r = rank_lexrank(article);
  CHECK(r.order.front() == 0);
  CHECK(r.order.back() != 0);
}

TEST_CASE("lexrank ranking is invariant to similarity scaling") {
  std::mt19937_64 rng(5);
  const auto sim = sentence_similarity(segment(oracle::random_article(rng, 10)));
  auto scaled = sim;
  for (auto& row : scaled) {
    for (auto& x : row) x *= 7.5;
  }
  const auto a = lexrank_scores(sim);
  const auto b = lexrank_scores(scaled);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
  CHECK(ranking_from_scores(a, Method::lexrank).order == ranking_from_scores(b, Method::lexrank).order);
}

TEST_CASE("claim-driven ranking") {
  LexicalEmbedder embedder;
  const auto claim = segment("The mayor cut school funding by half.");
  const auto article = segment(
      "The city council met on Tuesday. Residents discussed parking. "
      "The mayor cut school funding by half. Budget records are public.");
  const auto r = rank_claim(article, claim, embedder);
  CHECK(r.order.front() == 2);
  CHECK(r.scores.front() == doctest::Approx(1.0));
  CHECK(r.method == Method::claimdriven);

  ExtractContext ctx{&embedder, 0};
  const auto one = extract(article, claim, config(Method::claimdriven, 1), ctx);
  CHECK(one.text == "The mayor cut school funding by half.");
  CHECK_THROWS_AS(extract(article, claim, config(Method::claimdriven, 1), {}), UsageError);
}

TEST_CASE("ordering changes the sequence, not the set") {
  LexicalEmbedder embedder;
  const auto claim = segment("Rents rose in the harbor district.");
  const auto article = segment(
      "Harbor district rents rose. Rents fell downtown. Rents in the harbor district rose again. "
      "Parks opened. Harbor crews worked.");
  ExtractContext ctx{&embedder, 0};
  for (auto method : {Method::lexrank, Method::claimdriven}) {
    for (auto sel : {Selection::top, Selection::bottom}) {
      const auto art = extract(article, claim, config(method, 3, sel, Ordering::article), ctx);
      const auto rnk = extract(article, claim, config(method, 3, sel, Ordering::ranking), ctx);
      auto a = art.indices;
      auto b = rnk.indices;
      CHECK(std::is_sorted(a.begin(), a.end()));
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
  }
}

TEST_CASE("select_indices") {
  Ranking r;
  r.order = {3, 0, 4, 1, 2};
  r.scores = {0.5, 0.2, 0.15, 0.1, 0.05};
  CHECK(select_indices(r, 2, Selection::top, Ordering::ranking) == std::vector<std::size_t>{3, 0});
  CHECK(select_indices(r, 2, Selection::top, Ordering::article) == std::vector<std::size_t>{0, 3});
  CHECK(select_indices(r, 2, Selection::bottom, Ordering::ranking) == std::vector<std::size_t>{1, 2});
  CHECK(select_indices(r, 9, Selection::bottom, Ordering::article) ==
        std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("ranking_from_scores breaks ties by index") {
  const auto r = ranking_from_scores({0.2, 0.5, 0.2, 0.5}, Method::lexrank);
  CHECK(r.order == std::vector<std::size_t>{1, 3, 0, 2});
  CHECK(r.scores == std::vector<double>{0.5, 0.5, 0.2, 0.2});
}

TEST_CASE("auto k") {
  CHECK(known_auto_k("fullfact") == 2);
  CHECK(known_auto_k("liarpp") == 6);
  CHECK_FALSE(known_auto_k("other").has_value());
  const auto ff = load_corpus(testing::fixture("synthetic/fullfact.jsonl"));
  CHECK(auto_k(ff) == 2);
  const auto lpp = load_corpus(testing::fixture("synthetic/liarpp.jsonl"));
  CHECK(auto_k(lpp) == 6);

  std::vector<Triple> triples = {
      {"a", "misc", "C.", "A1. A2. A3.", "V1. V2. V3.", std::nullopt},
      {"b", "misc", "C.", "A1. A2. A3.", "V1. V2. V3. V4.", std::nullopt},
  };
  CHECK(auto_k(Corpus("misc", triples)) == 4);

  const auto article = segment("S1 here. S2 here. S3 here. S4 here.");
  const auto e = extract(article, segment("C."), ExtractConfig{}, ExtractContext{nullptr, 2});
  CHECK(e.indices.size() == 2);
  CHECK_THROWS_AS(extract(article, segment("C."), ExtractConfig{}, {}), UsageError);
}

TEST_CASE("extraction is deterministic") {
  LexicalEmbedder embedder;
  const auto corpus = load_corpus(testing::fixture("synthetic/liarpp.jsonl"));
  ExtractContext ctx{&embedder, 6};
  for (auto method : {Method::truncation, Method::lexrank, Method::claimdriven}) {
    ExtractConfig c;
    c.method = method;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& t = corpus.segmented(i);
      const auto a = extract(t.article, t.claim, c, ctx);
      const auto b = extract(t.article, t.claim, c, ctx);
      CHECK(a.indices == b.indices);
      CHECK(a.text == b.text);
    }
  }
}
