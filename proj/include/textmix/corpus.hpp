#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/rng.hpp"

namespace textmix {

/// One document: an ordered token stream plus identity metadata.
struct Text {
  std::string id;
  std::optional<std::string> title;
  std::optional<std::string> author;
  std::optional<std::string> language;
  std::vector<std::string> tokens;
  std::size_t type_count = 0;  // distinct tokens

  std::size_t token_count() const { return tokens.size(); }
};

inline Text make_text(std::string id, std::vector<std::string> tokens,
                      std::optional<std::string> title = {},
                      std::optional<std::string> author = {},
                      std::optional<std::string> language = {}) {
  if (id.empty()) fail("text id must be non-empty");
  if (tokens.empty()) fail(strfmt("text '%s' has no tokens", id.c_str()));
  Text text;
  text.id = std::move(id);
  text.title = std::move(title);
  text.author = std::move(author);
  text.language = std::move(language);
  text.tokens = std::move(tokens);
  std::unordered_set<std::string_view> seen;
  seen.reserve(text.tokens.size());
  for (const auto& t : text.tokens) seen.insert(t);
  text.type_count = seen.size();
  return text;
}

struct Corpus {
  std::vector<Text> texts;

  std::size_t size() const { return texts.size(); }
};

inline Corpus make_corpus(std::vector<Text> texts) {
  if (texts.empty()) fail("corpus must contain at least one text");
  std::unordered_set<std::string_view> ids;
  for (const auto& t : texts) {
    if (!ids.insert(t.id).second) fail(strfmt("duplicate text id '%s'", t.id.c_str()));
  }
  return Corpus{std::move(texts)};
}

/// Alphabet sizes from a table of Project Gutenberg language collections.
inline std::optional<int> default_char_count(std::string_view language) {
  struct Entry { const char* code; int chars; };
  static constexpr Entry kTable[] = {
      {"en", 46}, {"fr", 44}, {"fi", 31}, {"nl", 48}, {"pt", 38},
      {"de", 30}, {"es", 34}, {"it", 29}, {"sv", 34}, {"el", 35},
  };
  for (const auto& e : kTable) {
    if (language == e.code) return e.chars;
  }
  return std::nullopt;
}

struct CorpusStats {
  std::size_t book_count = 0;
  std::size_t min_types = 0;       // smallest per-text vocabulary
  double mean_types = 0.0;
  std::size_t max_types = 0;
  std::size_t corpus_types = 0;    // distinct tokens across all texts
  std::uint64_t total_tokens = 0;
  std::optional<int> char_count;   // alphabet size, when known
};

inline CorpusStats corpus_stats(const Corpus& corpus, std::optional<int> char_count = {}) {
  if (corpus.texts.empty()) fail("corpus must contain at least one text");
  CorpusStats stats;
  stats.book_count = corpus.texts.size();
  stats.min_types = corpus.texts.front().type_count;
  double sum_types = 0.0;
  std::unordered_set<std::string_view> all;
  for (const auto& text : corpus.texts) {
    stats.min_types = std::min(stats.min_types, text.type_count);
    stats.max_types = std::max(stats.max_types, text.type_count);
    sum_types += static_cast<double>(text.type_count);
    stats.total_tokens += text.tokens.size();
    for (const auto& t : text.tokens) all.insert(t);
  }
  stats.mean_types = sum_types / static_cast<double>(stats.book_count);
  stats.corpus_types = all.size();
  if (char_count) {
    stats.char_count = char_count;
  } else {
    bool uniform = true;
    const auto& first = corpus.texts.front().language;
    for (const auto& text : corpus.texts) {
      if (text.language != first) { uniform = false; break; }
    }
    if (uniform && first) stats.char_count = default_char_count(*first);
  }
  return stats;
}

/// Indices of corpus texts split into ten vocabulary-size deciles.
/// Texts are ordered by (type_count, id); the first `size % 10` deciles
/// receive one extra text. Decile d (1-based) is returned at index d-1.
inline std::vector<std::vector<std::size_t>> decile_partition(const Corpus& corpus) {
  if (corpus.texts.size() < 10) {
    fail(strfmt("decile partition needs at least 10 texts, got %zu", corpus.texts.size()));
  }
  std::vector<std::size_t> order(corpus.texts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Text& ta = corpus.texts[a];
    const Text& tb = corpus.texts[b];
    if (ta.type_count != tb.type_count) return ta.type_count < tb.type_count;
    return ta.id < tb.id;
  });
  std::vector<std::vector<std::size_t>> deciles(10);
  std::size_t base = order.size() / 10;
  std::size_t extra = order.size() % 10;
  std::size_t at = 0;
  for (std::size_t d = 0; d < 10; ++d) {
    std::size_t len = base + (d < extra ? 1 : 0);
    deciles[d].assign(order.begin() + at, order.begin() + at + len);
    at += len;
  }
  return deciles;
}

namespace detail {

// Text indices for sample `s` of a decile pool; shared by the sampling API
// and the decile harness so both draw identical samples.
inline std::vector<std::size_t> decile_sample_picks(const std::vector<std::size_t>& pool,
                                                    std::size_t books_per_sample, int decile,
                                                    std::size_t s, std::uint64_t seed) {
  std::uint64_t stream = (static_cast<std::uint64_t>(decile) << 32) | static_cast<std::uint64_t>(s);
  auto rng = make_rng(derive_seed(seed, stream));
  std::vector<std::size_t> picks(pool);
  partial_shuffle(std::span<std::size_t>(picks), books_per_sample, rng);
  picks.resize(books_per_sample);
  return picks;
}

}  // namespace detail

/// Draws `n_samples` random sub-corpora of `books_per_sample` distinct texts
/// from one decile (1-based). Deterministic under (seed, decile, sample).
inline std::vector<Corpus> sample_corpora_by_decile(const Corpus& corpus, int decile,
                                                    std::size_t books_per_sample,
                                                    std::size_t n_samples, std::uint64_t seed) {
  if (decile < 1 || decile > 10) fail(strfmt("decile must be in 1..10, got %d", decile));
  if (books_per_sample == 0) fail("books_per_sample must be positive");
  auto deciles = decile_partition(corpus);
  const auto& pool = deciles[static_cast<std::size_t>(decile - 1)];
  if (pool.size() < books_per_sample) {
    fail(strfmt("decile %d holds %zu texts, need %zu per sample", decile, pool.size(),
                books_per_sample));
  }
  std::vector<Corpus> samples;
  samples.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto picks = detail::decile_sample_picks(pool, books_per_sample, decile, s, seed);
    std::vector<Text> texts;
    texts.reserve(books_per_sample);
    for (std::size_t idx : picks) texts.push_back(corpus.texts[idx]);
    samples.push_back(make_corpus(std::move(texts)));
  }
  return samples;
}

}  // namespace textmix
