#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <unordered_set>

#include "oracles.hpp"
#include "textmix/generators.hpp"

using namespace textmix;

TEST_CASE("generator configs are validated") {
  CHECK_THROWS(validate(GeneratorConfig{0.0, 0.0, 100, 1}));
  CHECK_THROWS(validate(GeneratorConfig{1.0, 0.0, 100, 1}));
  CHECK_THROWS(validate(GeneratorConfig{0.5, -0.1, 100, 1}));
  CHECK_THROWS(validate(GeneratorConfig{0.5, 0.0, 0, 1}));
  CHECK_NOTHROW(validate(GeneratorConfig{0.5, 0.0, 100, 1}));
}

TEST_CASE("type sequences start fresh and stay dense") {
  GeneratorConfig config{0.3, 0.0, 5000, 99};
  auto ids = generate_type_sequence(config);
  REQUIRE(ids.size() == 5000);
  CHECK(ids[0] == 1);
  std::uint32_t seen_max = 0;
  for (std::uint32_t id : ids) {
    // A new type is always the next unused index.
    CHECK(id <= seen_max + 1);
    seen_max = std::max(seen_max, id);
  }
  // Every index up to the max was introduced.
  std::unordered_set<std::uint32_t> distinct(ids.begin(), ids.end());
  CHECK(distinct.size() == seen_max);

  auto again = generate_type_sequence(config);
  CHECK(ids == again);
  config.seed = 100;
  CHECK(ids != generate_type_sequence(config));
}

TEST_CASE("constant introduction rate yields the expected vocabulary scale") {
  GeneratorConfig config{0.1, 0.0, 200000, 5};
  auto ids = generate_type_sequence(config);
  std::uint32_t vocab = 0;
  for (std::uint32_t id : ids) vocab = std::max(vocab, id);
  // E[V] = 1 + 0.1 (M - 1); allow five sigma of binomial noise.
  double expected = 1.0 + 0.1 * (200000 - 1);
  double sigma = std::sqrt(200000 * 0.1 * 0.9);
  CHECK(std::fabs(static_cast<double>(vocab) - expected) < 5.0 * sigma);
}

TEST_CASE("decaying introduction rate slows vocabulary growth") {
  GeneratorConfig flat{0.1, 0.0, 100000, 7};
  GeneratorConfig decaying{0.1, 0.5, 100000, 7};
  auto count_vocab = [](const std::vector<std::uint32_t>& ids) {
    std::uint32_t vocab = 0;
    for (auto id : ids) vocab = std::max(vocab, id);
    return vocab;
  };
  auto v_flat = count_vocab(generate_type_sequence(flat));
  auto v_decaying = count_vocab(generate_type_sequence(decaying));
  CHECK(v_decaying < v_flat / 2);
}

TEST_CASE("generate renders zero-padded labels") {
  CHECK(type_label(1) == "w000001");
  CHECK(type_label(999999) == "w999999");
  GeneratorConfig config{0.5, 0.0, 50, 3};
  auto tokens = generate(config);
  REQUIRE(tokens.size() == 50);
  CHECK(tokens[0] == "w000001");
  for (const auto& t : tokens) {
    CHECK(t.size() >= 7);
    CHECK(t[0] == 'w');
  }
}

namespace {
std::vector<GeneratorConfig> trio() {
  return {GeneratorConfig{0.4, 0.0, 400, 21}, GeneratorConfig{0.4, 0.0, 400, 22},
          GeneratorConfig{0.4, 0.0, 400, 23}};
}

std::set<std::string> vocabulary(const Text& text) {
  return {text.tokens.begin(), text.tokens.end()};
}
}  // namespace

TEST_CASE("full overlap shares one label space") {
  auto corpus = synthesize_corpus(trio(), VocabularySharing{});
  REQUIRE(corpus.size() == 3);
  CHECK(corpus.texts[0].id == "text001");
  CHECK(corpus.texts[2].id == "text003");
  auto stats = corpus_stats(corpus);
  CHECK(stats.corpus_types == stats.max_types);  // nested prefixes of one space
  for (const auto& text : corpus.texts) CHECK(text.tokens[0] == "w000001");
}

TEST_CASE("disjoint sharing namespaces every text") {
  VocabularySharing sharing;
  sharing.policy = VocabularySharing::Policy::disjoint;
  auto corpus = synthesize_corpus(trio(), sharing);
  auto stats = corpus_stats(corpus);
  std::size_t sum = 0;
  for (const auto& text : corpus.texts) sum += text.type_count;
  CHECK(stats.corpus_types == sum);
  CHECK(corpus.texts[0].tokens[0] == "t001w000001");
}

TEST_CASE("random overlap interpolates between the two extremes") {
  VocabularySharing zero;
  zero.policy = VocabularySharing::Policy::random_overlap;
  zero.q = 0.0;
  zero.seed = 5;
  VocabularySharing one = zero;
  one.q = 1.0;

  VocabularySharing disjoint;
  disjoint.policy = VocabularySharing::Policy::disjoint;

  auto by_zero = synthesize_corpus(trio(), zero);
  auto as_disjoint = synthesize_corpus(trio(), disjoint);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(by_zero.texts[t].tokens == as_disjoint.texts[t].tokens);
  }

  auto by_one = synthesize_corpus(trio(), one);
  auto as_full = synthesize_corpus(trio(), VocabularySharing{});
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(by_one.texts[t].tokens == as_full.texts[t].tokens);
  }

  VocabularySharing half = zero;
  half.q = 0.5;
  auto mixed = synthesize_corpus(trio(), half);
  std::size_t shared = 0, niche = 0;
  for (const auto& text : mixed.texts) {
    for (const auto& word : vocabulary(text)) {
      (word[0] == 'w' ? shared : niche) += 1;
    }
  }
  CHECK(shared > 0);
  CHECK(niche > 0);
}

TEST_CASE("shared core keeps the top of every text common") {
  VocabularySharing sharing;
  sharing.policy = VocabularySharing::Policy::shared_core;
  sharing.core_size = 30;
  auto corpus = synthesize_corpus(trio(), sharing);
  std::size_t private_total = 0;
  std::set<std::string> core_union;
  for (const auto& text : corpus.texts) {
    for (const auto& word : vocabulary(text)) {
      if (word[0] == 'w') {
        core_union.insert(word);
      } else {
        ++private_total;
      }
    }
    CHECK(vocabulary(text).count("w000001") == 1);
  }
  CHECK(core_union.size() <= 30);
  auto stats = corpus_stats(corpus);
  CHECK(stats.corpus_types == core_union.size() + private_total);
}

TEST_CASE("corpus synthesis is deterministic") {
  VocabularySharing sharing;
  sharing.policy = VocabularySharing::Policy::random_overlap;
  sharing.q = 0.3;
  sharing.seed = 11;
  auto a = synthesize_corpus(trio(), sharing);
  auto b = synthesize_corpus(trio(), sharing);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a.texts[t].id == b.texts[t].id);
    CHECK(a.texts[t].tokens == b.texts[t].tokens);
  }
}
