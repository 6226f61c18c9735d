#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "vf/error.hpp"
#include "vf/rouge.hpp"

using namespace vf;

TEST_CASE("rouge_n hand cases") {
  const Tokens same = {"the", "claim", "is", "false"};
  const auto id = rouge_n(same, same, 1);
  CHECK(id.precision == 1.0);
  CHECK(id.recall == 1.0);
  CHECK(id.f1 == 1.0);

  const auto r = rouge_n(Tokens{"the", "cat", "ran"}, Tokens{"the", "cat", "sat"}, 1);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const auto clipped = rouge_n(Tokens{"a", "a"}, Tokens{"a"}, 1);
  CHECK(clipped.recall == 1.0);
  CHECK(clipped.precision == 0.5);

  const auto bigram = rouge_n(Tokens{"the", "cat", "ran"}, Tokens{"the", "cat", "sat"}, 2);
  CHECK(bigram.variant == RougeVariant::r2);
  CHECK(bigram.recall == 0.5);

  CHECK(rouge_n(Tokens{}, same, 1).f1 == 0.0);
  CHECK(rouge_n(same, Tokens{}, 1).f1 == 0.0);
  CHECK(rouge_n(Tokens{"x"}, Tokens{"x"}, 2).f1 == 0.0);
  CHECK_THROWS_AS(rouge_n(same, same, 0), UsageError);
}

TEST_CASE("rouge_l hand cases") {
  const Tokens same = {"a", "b", "c"};
  CHECK(rouge_l(same, same).f1 == 1.0);
  const auto sub = rouge_l(Tokens{"a", "b", "c", "d"}, Tokens{"b", "d"});
  CHECK(lcs_length(Tokens{"a", "b", "c", "d"}, Tokens{"b", "d"}) == 2);
  CHECK(sub.recall == 1.0);
  CHECK(sub.precision == 0.5);
  const auto disjoint = rouge_l(Tokens{"x", "y"}, Tokens{"p", "q"});
  CHECK(disjoint.precision == 0.0);
  CHECK(disjoint.recall == 0.0);
  CHECK(disjoint.f1 == 0.0);
}

TEST_CASE("lcs_length edge cases") {
  CHECK(lcs_length(Tokens{"x"}, Tokens{"x"}) == 1);
  CHECK(lcs_length(Tokens{}, Tokens{"a", "b"}) == 0);
  CHECK(lcs_length(Tokens{"a", "b"}, Tokens{}) == 0);
}

TEST_CASE("lcs_length matches exhaustive subsequence search") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto a = oracle::random_tokens(rng, 12);
    const auto b = oracle::random_tokens(rng, 12);
    const auto l = lcs_length(a, b);
    CHECK(l == oracle::lcs_bruteforce(a, b));
    CHECK(l <= std::min(a.size(), b.size()));
    const bool contained = oracle::is_subsequence(a, b) || oracle::is_subsequence(b, a);
    CHECK((l == std::min(a.size(), b.size())) == contained);
  }
}

TEST_CASE("ROUGE properties on random pairs") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    const auto a = oracle::random_tokens(rng, 15, 6);
    const auto b = oracle::random_tokens(rng, 15, 6);
    const auto ab = rouge_all(a, b);
    const auto ba = rouge_all(b, a);
    for (auto v : {RougeVariant::r1, RougeVariant::r2, RougeVariant::rl}) {
      const auto& x = ab.get(v);
      CHECK(x.precision >= 0.0);
      CHECK(x.precision <= 1.0);
      CHECK(x.recall >= 0.0);
      CHECK(x.recall <= 1.0);
      CHECK(x.f1 == f_measure(x.precision, x.recall));
      CHECK(x.precision == ba.get(v).recall);
      CHECK(x.f1 == ba.get(v).f1);
    }
    CHECK(ab.rl.recall <= ab.r1.recall);

    // Reference multiset inside the candidate => full R1 recall.
    Tokens superset = a;
    superset.insert(superset.end(), b.begin(), b.end());
    if (!b.empty()) CHECK(rouge_n(superset, b, 1).recall == 1.0);
  }
}

TEST_CASE("aggregate") {
  RougeScore one{RougeVariant::r1, 1.0, 1.0, 1.0};
  RougeScore zero{RougeVariant::r1, 0.0, 0.0, 0.0};
  CHECK(aggregate(std::vector<RougeScore>{one, zero}).f1 == 0.5);
  const RougeScore single{RougeVariant::rl, 0.25, 0.75, f_measure(0.25, 0.75)};
  const auto same = aggregate(std::vector<RougeScore>{single});
  CHECK(same.precision == single.precision);
  CHECK(same.recall == single.recall);
  CHECK(same.f1 == single.f1);
  CHECK_THROWS_AS(aggregate(std::vector<RougeScore>{}), DataError);
  CHECK_THROWS_AS(aggregate(std::vector<RougeScore>{one, RougeScore{RougeVariant::r2}}), DataError);

  // Means computed by hand: p = (0.2+0.4+0.6+0.8+1.0)/5, r = (0.5+0.5+0.25+0.25+1)/5,
  // f1 = (0.1+0.2+0.3+0.4+0.5)/5.
  const std::vector<RougeScore> five = {{RougeVariant::r2, 0.2, 0.5, 0.1},
                                        {RougeVariant::r2, 0.4, 0.5, 0.2},
                                        {RougeVariant::r2, 0.6, 0.25, 0.3},
                                        {RougeVariant::r2, 0.8, 0.25, 0.4},
                                        {RougeVariant::r2, 1.0, 1.0, 0.5}};
  const auto mean = aggregate(five);
  CHECK(mean.precision == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(mean.recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mean.f1 == doctest::Approx(0.3).epsilon(1e-12));
}
