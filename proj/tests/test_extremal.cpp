#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "textmix/extremal.hpp"
#include "textmix/rank_frequency.hpp"

using namespace textmix;

namespace {
RankFrequencyDistribution from_counts(std::vector<double> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return make_distribution(std::move(counts));
}
}  // namespace

TEST_CASE("gap distribution on two repeats of three tokens is uniform") {
  auto gd = gap_distribution(2.0, 3.0);
  REQUIRE(gd.pmf.size() == 3);
  for (double v : gd.pmf) CHECK_THAT(v, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THAT(gd.mean, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("gap distribution with only repeats left waits to the end") {
  auto gd = gap_distribution(3.0, 3.0);
  REQUIRE(gd.pmf.size() == 4);
  CHECK(gd.pmf[0] == 0.0);
  CHECK(gd.pmf[1] == 0.0);
  CHECK(gd.pmf[2] == 0.0);
  CHECK(gd.pmf[3] == 1.0);
  CHECK(gd.mean == 3.0);
}

TEST_CASE("gap distribution with no repeats is a point mass at zero") {
  auto gd = gap_distribution(0.0, 5.0);
  REQUIRE(gd.pmf.size() == 1);
  CHECK(gd.pmf[0] == 1.0);
  CHECK(gd.mean == 0.0);
}

TEST_CASE("gap distribution sums to one for integer repeat counts") {
  for (double i : {1.0, 7.0, 42.0, 333.0, 1000.0}) {
    for (double j : {i, i + 1.0, i + 3.5, 2 * i, 10 * i}) {
      auto gd = gap_distribution(i, j);
      double sum = 0.0;
      for (double v : gd.pmf) sum += v;
      INFO("repeats " << i << " of " << j);
      CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("gap distribution rejects impossible compositions") {
  CHECK_THROWS(gap_distribution(1.0, 0.0));
  CHECK_THROWS(gap_distribution(5.0, 3.0));
  CHECK_THROWS(gap_distribution(-1.0, 3.0));
}

TEST_CASE("gap distribution truncates long tails") {
  auto gd = gap_distribution(5000.0, 6000.0, 1000);
  CHECK(gd.pmf.size() == 1001);
}

TEST_CASE("two a's and one b: enumeration gives a third, plug-in gives zero") {
  auto exhaustive = oracles::enumerate_gap_means({{"a", 2}, {"b", 1}});
  REQUIRE(exhaustive.size() == 1);
  CHECK(exhaustive[0] == 1.0 / 3.0);

  // The analytic profile plugs expectations into the gap formula, which
  // underestimates here: after one expected draw nothing looks repeated.
  auto analytic = extremal_alpha_analytic(from_counts({2, 1}));
  REQUIRE(analytic.gap_mean.size() == 1);
  CHECK(analytic.gap_mean[0] == 0.0);
  CHECK(analytic.profile.alpha[0] == 1.0);
  CHECK(analytic.profile.alpha[1] == 1.0);

  auto mc = extremal_alpha_mc(from_counts({2, 1}), 40000, 17);
  REQUIRE(mc.gap_mean.size() == 1);
  REQUIRE(mc.gap_se.size() == 1);
  CHECK(std::fabs(mc.gap_mean[0] - 1.0 / 3.0) <= 3.0 * mc.gap_se[0]);
}

TEST_CASE("hapax-only corpora have no gaps in either estimator") {
  auto counts = from_counts({1, 1, 1, 1, 1});
  auto analytic = extremal_alpha_analytic(counts);
  auto mc = extremal_alpha_mc(counts, 500, 3);
  for (double a : analytic.profile.alpha) CHECK(a == 1.0);
  for (double a : mc.profile.alpha) CHECK(a == 1.0);
  for (double g : analytic.gap_mean) CHECK(g == 0.0);
  for (double g : mc.gap_mean) CHECK(g == 0.0);
}

TEST_CASE("Monte Carlo gaps match exhaustive enumeration on tiny corpora") {
  std::vector<std::map<std::string, std::uint64_t>> corpora = {
      {{"a", 3}, {"b", 2}, {"c", 1}},
      {{"a", 2}, {"b", 2}, {"c", 2}},
      {{"a", 4}, {"b", 2}, {"c", 1}},
      {{"a", 2}, {"b", 2}, {"c", 1}, {"d", 1}},
  };
  std::uint64_t seed = 1000;
  for (const auto& counts : corpora) {
    auto exhaustive = oracles::enumerate_gap_means(counts);
    std::vector<double> values;
    for (const auto& [word, c] : counts) values.push_back(static_cast<double>(c));
    auto mc = extremal_alpha_mc(from_counts(values), 30000, seed++);
    REQUIRE(mc.gap_mean.size() == exhaustive.size());
    for (std::size_t n = 0; n < exhaustive.size(); ++n) {
      INFO("gap after word " << n + 1);
      double se = std::max(mc.gap_se[n], 1e-12);
      CHECK(std::fabs(mc.gap_mean[n] - exhaustive[n]) <= 3.0 * se);
    }
  }
}

TEST_CASE("expected positions accumulate one plus each gap") {
  auto counts = from_counts({3, 2, 1});
  auto analytic = extremal_alpha_analytic(counts);
  REQUIRE(analytic.expected_position.size() == 3);
  CHECK(analytic.expected_position[0] == 1.0);
  CHECK_THAT(analytic.expected_position[1],
             Catch::Matchers::WithinAbs(2.0 + analytic.gap_mean[0], 1e-12));
  CHECK_THAT(analytic.expected_position[2],
             Catch::Matchers::WithinAbs(3.0 + analytic.gap_mean[0] + analytic.gap_mean[1], 1e-12));
  CHECK(analytic.profile.method == "analytic");
  CHECK(analytic.profile.runs == 0);
}

TEST_CASE("extremal profiles require integral counts") {
  CHECK_THROWS_WITH(extremal_alpha_analytic(make_distribution({2.5, 1.5})),
                    Catch::Matchers::ContainsSubstring("integer"));
  CHECK_THROWS(extremal_alpha_mc(make_distribution({2.5, 1.5}), 10, 1));
  CHECK_THROWS_WITH(extremal_alpha_mc(from_counts({2, 1}), 0, 1),
                    Catch::Matchers::ContainsSubstring("one run"));
}

TEST_CASE("Monte Carlo extremal profiles are reproducible") {
  auto counts = from_counts({6, 5, 4, 3, 2, 1, 1});
  auto a = extremal_alpha_mc(counts, 400, 42);
  auto b = extremal_alpha_mc(counts, 400, 42);
  auto c = extremal_alpha_mc(counts, 400, 42, 3);
  CHECK(a.gap_mean == b.gap_mean);
  CHECK(a.gap_mean == c.gap_mean);
  CHECK(a.profile.alpha == c.profile.alpha);
  CHECK(a.profile.method == "mc");
  CHECK(a.profile.runs == 400);
}

TEST_CASE("plug-in error shrinks as the corpus grows") {
  // Same shape (same exponent), ten times the vocabulary and volume: the
  // expectation plug-in gets closer to the Monte Carlo truth at each
  // corpus's half-vocabulary point. At 60000 runs the base deviation
  // (~0.012 relative) sits well above the Monte Carlo noise (~0.003).
  auto rel_err = [](const RankFrequencyDistribution& d) {
    std::size_t half = d.size() / 2;
    auto analytic = extremal_alpha_analytic(d);
    auto mc = extremal_alpha_mc(d, 60000, 777);
    double a = analytic.profile.alpha[half - 1];
    double m = mc.profile.alpha[half - 1];
    return std::fabs(a - m) / m;
  };
  CHECK(rel_err(idealize(240, 1200.0)) < rel_err(idealize(24, 120.0)));
}
