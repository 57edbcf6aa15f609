#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/corpus.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rng.hpp"

namespace textmix {

/// Regime annotations carried alongside an introduction-rate profile.
struct RegimeBoundaries {
  std::optional<int> char_count;  // alphabet scale, start of the word regime
  std::size_t min_types = 0;      // below: no mixing decay
  double mean_types = 0.0;        // typical single-text vocabulary
  std::size_t max_types = 0;      // above: every text contributes
};

inline RegimeBoundaries regime_boundaries(const CorpusStats& stats) {
  return RegimeBoundaries{stats.char_count, stats.min_types, stats.mean_types, stats.max_types};
}

/// One pass over a shuffled corpus. Entry n-1 is the memoryless vocabulary
/// count at the token position where the growing vocabulary first reaches n.
struct MixingTrace {
  std::size_t run_id = 0;
  std::vector<std::string> order;             // text ids in reading order
  std::vector<std::uint64_t> memoryless_at_event;
};

/// Introduction-rate profile alpha(n) = n / <memoryless count at event n>.
struct AlphaProfile {
  std::vector<double> alpha;
  std::vector<double> mean_memoryless;
  std::size_t runs = 0;
  std::optional<RegimeBoundaries> regimes;
  std::string method = "mixing";
};

/// Token streams interned to dense type ids, with first-in-text flags
/// precomputed for the unshuffled token order.
class MixingWorkspace {
 public:
  explicit MixingWorkspace(const Corpus& corpus) {
    std::unordered_map<std::string_view, std::uint32_t> intern;
    text_ids_.reserve(corpus.texts.size());
    tokens_.reserve(corpus.texts.size());
    first_in_text_.reserve(corpus.texts.size());
    for (const auto& text : corpus.texts) {
      text_ids_.push_back(text.id);
      std::vector<std::uint32_t> ids;
      ids.reserve(text.tokens.size());
      for (const auto& token : text.tokens) {
        auto [it, inserted] = intern.try_emplace(token, static_cast<std::uint32_t>(intern.size()));
        ids.push_back(it->second);
      }
      tokens_.push_back(std::move(ids));
      total_tokens_ += text.tokens.size();
    }
    type_count_ = intern.size();
    std::vector<std::uint32_t> stamp(type_count_, 0);
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
      std::vector<std::uint8_t> flags(tokens_[t].size());
      for (std::size_t k = 0; k < tokens_[t].size(); ++k) {
        std::uint32_t id = tokens_[t][k];
        flags[k] = (stamp[id] != t + 1);
        stamp[id] = static_cast<std::uint32_t>(t + 1);
      }
      first_in_text_.push_back(std::move(flags));
    }
  }

  std::size_t text_count() const { return tokens_.size(); }
  std::size_t type_count() const { return type_count_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const std::vector<std::string>& text_ids() const { return text_ids_; }
  const std::vector<std::uint32_t>& tokens(std::size_t t) const { return tokens_[t]; }
  const std::vector<std::uint8_t>& first_in_text(std::size_t t) const { return first_in_text_[t]; }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t t = 0; t < text_ids_.size(); ++t) {
      if (text_ids_[t] == id) return t;
    }
    fail(strfmt("unknown text id '%s'", id.c_str()));
  }

 private:
  std::vector<std::string> text_ids_;
  std::vector<std::vector<std::uint32_t>> tokens_;
  std::vector<std::vector<std::uint8_t>> first_in_text_;
  std::size_t type_count_ = 0;
  std::uint64_t total_tokens_ = 0;
};

namespace detail {

// Epoch-stamped membership set, reusable across runs without clearing.
struct SeenSet {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  explicit SeenSet(std::size_t n) : stamp(n, 0) {}

  void reset() { ++epoch; }
  bool insert(std::uint32_t id) {
    if (stamp[id] == epoch) return false;
    stamp[id] = epoch;
    return true;
  }
};

// Walks texts in `order`, calling on_token(n, N, grew) after each token.
// When shuffle_rng is set, each text's tokens are visited in a random order
// and first-in-text is tracked live instead of using precomputed flags.
template <typename Fn>
inline void walk_mixing(const MixingWorkspace& ws, std::span<const std::size_t> order,
                        SeenSet& corpus_seen, SeenSet& text_seen,
                        std::mt19937_64* shuffle_rng, std::vector<std::uint32_t>& scratch,
                        Fn&& on_token) {
  corpus_seen.reset();
  std::uint64_t growing = 0;
  std::uint64_t memoryless = 0;
  for (std::size_t t : order) {
    const auto& ids = ws.tokens(t);
    if (shuffle_rng == nullptr) {
      const auto& flags = ws.first_in_text(t);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        memoryless += flags[k];
        bool grew = corpus_seen.insert(ids[k]);
        growing += grew;
        on_token(growing, memoryless, grew);
      }
    } else {
      scratch.assign(ids.begin(), ids.end());
      fisher_yates(std::span<std::uint32_t>(scratch), *shuffle_rng);
      text_seen.reset();
      for (std::uint32_t id : scratch) {
        memoryless += text_seen.insert(id);
        bool grew = corpus_seen.insert(id);
        growing += grew;
        on_token(growing, memoryless, grew);
      }
    }
  }
}

}  // namespace detail

/// Per-position (growing, memoryless) vocabulary counts for one reading order.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> mixing_series(
    const MixingWorkspace& ws, std::span<const std::size_t> order) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> series;
  series.reserve(ws.total_tokens());
  detail::SeenSet corpus_seen(ws.type_count());
  detail::SeenSet text_seen(0);
  std::vector<std::uint32_t> scratch;
  detail::walk_mixing(ws, order, corpus_seen, text_seen, nullptr, scratch,
                      [&](std::uint64_t n, std::uint64_t N, bool) { series.emplace_back(n, N); });
  return series;
}

namespace detail {

inline std::vector<std::size_t> order_indices(const MixingWorkspace& ws,
                                              std::span<const std::string> order) {
  if (order.size() != ws.text_count()) {
    fail(strfmt("order must list all %zu texts exactly once, got %zu", ws.text_count(),
                order.size()));
  }
  std::vector<std::size_t> indices;
  indices.reserve(order.size());
  std::vector<std::uint8_t> used(ws.text_count(), 0);
  for (const auto& id : order) {
    std::size_t t = ws.index_of(id);
    if (used[t]) fail(strfmt("text id '%s' appears twice in order", id.c_str()));
    used[t] = 1;
    indices.push_back(t);
  }
  return indices;
}

template <typename Sink>
inline void trace_events(const MixingWorkspace& ws, std::span<const std::size_t> order,
                         SeenSet& corpus_seen, SeenSet& text_seen,
                         std::mt19937_64* shuffle_rng, std::vector<std::uint32_t>& scratch,
                         Sink&& sink) {
  walk_mixing(ws, order, corpus_seen, text_seen, shuffle_rng, scratch,
              [&](std::uint64_t, std::uint64_t N, bool grew) {
                if (grew) sink(N);
              });
}

}  // namespace detail

/// One mixing pass over explicitly ordered texts. An optional shuffle seed
/// randomizes token order inside each text (sensitivity studies only).
inline MixingTrace run_mixing_once(const MixingWorkspace& ws, std::span<const std::string> order,
                                   std::optional<std::uint64_t> token_shuffle_seed = {},
                                   std::size_t run_id = 0) {
  auto indices = detail::order_indices(ws, order);
  MixingTrace trace;
  trace.run_id = run_id;
  trace.order.assign(order.begin(), order.end());
  trace.memoryless_at_event.reserve(ws.type_count());
  detail::SeenSet corpus_seen(ws.type_count());
  detail::SeenSet text_seen(ws.type_count());
  std::vector<std::uint32_t> scratch;
  std::optional<std::mt19937_64> rng;
  if (token_shuffle_seed) rng = make_rng(*token_shuffle_seed);
  detail::trace_events(ws, indices, corpus_seen, text_seen, rng ? &*rng : nullptr, scratch,
                       [&](std::uint64_t N) { trace.memoryless_at_event.push_back(N); });
  return trace;
}

inline MixingTrace run_mixing_once(const Corpus& corpus, std::span<const std::string> order,
                                   std::optional<std::uint64_t> token_shuffle_seed = {},
                                   std::size_t run_id = 0) {
  MixingWorkspace ws(corpus);
  return run_mixing_once(ws, order, token_shuffle_seed, run_id);
}

/// Harmonic-style aggregation: alpha(n) = n / mean(memoryless at event n).
inline AlphaProfile aggregate_traces(std::span<const MixingTrace> traces) {
  if (traces.empty()) fail("need at least one mixing trace");
  std::size_t n_types = traces.front().memoryless_at_event.size();
  std::vector<std::uint64_t> sums(n_types, 0);
  for (const auto& trace : traces) {
    if (trace.memoryless_at_event.size() != n_types) {
      fail("mixing traces disagree on vocabulary size");
    }
    for (std::size_t k = 0; k < n_types; ++k) sums[k] += trace.memoryless_at_event[k];
  }
  AlphaProfile profile;
  profile.runs = traces.size();
  profile.alpha.resize(n_types);
  profile.mean_memoryless.resize(n_types);
  for (std::size_t k = 0; k < n_types; ++k) {
    profile.mean_memoryless[k] =
        static_cast<double>(sums[k]) / static_cast<double>(traces.size());
    profile.alpha[k] = static_cast<double>(k + 1) / profile.mean_memoryless[k];
  }
  return profile;
}

inline constexpr std::size_t kMixingRunFloor = 100;

inline std::size_t default_mixing_runs(std::size_t n_texts) {
  return std::max<std::size_t>(10 * n_texts, kMixingRunFloor);
}

/// Monte Carlo profile over uniformly random reading orders. `runs == 0`
/// selects the default count (10 per text, floor of 100). Results are
/// independent of thread count.
inline AlphaProfile run_mixing(const Corpus& corpus, std::size_t runs, std::uint64_t seed,
                               unsigned threads = 1) {
  MixingWorkspace ws(corpus);
  if (runs == 0) runs = default_mixing_runs(ws.text_count());
  std::size_t n_types = ws.type_count();
  unsigned workers = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> sums(workers,
                                               std::vector<std::uint64_t>(n_types, 0));
  parallel_chunks(runs, threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
    detail::SeenSet corpus_seen(n_types);
    detail::SeenSet text_seen(0);
    std::vector<std::uint32_t> scratch;
    std::vector<std::size_t> order(ws.text_count());
    auto& acc = sums[w];
    for (std::size_t run = begin; run < end; ++run) {
      auto rng = make_rng(derive_seed(seed, run));
      for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
      fisher_yates(std::span<std::size_t>(order), rng);
      std::size_t event = 0;
      detail::trace_events(ws, order, corpus_seen, text_seen, nullptr, scratch,
                           [&](std::uint64_t N) { acc[event++] += N; });
    }
  });
  for (std::size_t w = 1; w < sums.size(); ++w) {
    for (std::size_t k = 0; k < n_types; ++k) sums[0][k] += sums[w][k];
  }
  AlphaProfile profile;
  profile.runs = runs;
  profile.alpha.resize(n_types);
  profile.mean_memoryless.resize(n_types);
  for (std::size_t k = 0; k < n_types; ++k) {
    profile.mean_memoryless[k] = static_cast<double>(sums[0][k]) / static_cast<double>(runs);
    profile.alpha[k] = static_cast<double>(k + 1) / profile.mean_memoryless[k];
  }
  profile.regimes = regime_boundaries(corpus_stats(corpus));
  return profile;
}

}  // namespace textmix
