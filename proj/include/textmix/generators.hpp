#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/corpus.hpp"
#include "textmix/rng.hpp"

namespace textmix {

/// Rich-get-richer stream: token m is a new type with probability
/// min(1, alpha0 n^-mu), otherwise a uniform copy of an earlier token.
struct GeneratorConfig {
  double alpha0 = 0.1;
  double mu = 0.0;
  std::uint64_t tokens = 0;  // stream length
  std::uint64_t seed = 0;
};

inline void validate(const GeneratorConfig& config) {
  if (!(config.alpha0 > 0.0 && config.alpha0 < 1.0)) {
    fail(strfmt("alpha0 must lie in (0, 1), got %g", config.alpha0));
  }
  if (!(config.mu >= 0.0)) fail(strfmt("mu must be >= 0, got %g", config.mu));
  if (config.tokens == 0) fail("generator needs a positive token target");
}

/// 1-based type indices in introduction order; index 1 is the first token.
inline std::vector<std::uint32_t> generate_type_sequence(const GeneratorConfig& config) {
  validate(config);
  auto rng = make_rng(config.seed);
  std::vector<std::uint32_t> stream;
  stream.reserve(config.tokens);
  stream.push_back(1);
  std::uint32_t n_types = 1;
  double introduce_p = std::min(1.0, config.alpha0 * std::pow(1.0, -config.mu));
  for (std::uint64_t m = 1; m < config.tokens; ++m) {
    if (uniform_unit(rng) < introduce_p) {
      ++n_types;
      stream.push_back(n_types);
      introduce_p = std::min(1.0, config.alpha0 * std::pow(static_cast<double>(n_types),
                                                           -config.mu));
    } else {
      stream.push_back(stream[uniform_below(rng, m)]);
    }
  }
  return stream;
}

inline std::string type_label(std::uint32_t type_index) {
  return strfmt("w%06u", type_index);
}

inline std::vector<std::string> generate(const GeneratorConfig& config) {
  auto ids = generate_type_sequence(config);
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (std::uint32_t id : ids) tokens.push_back(type_label(id));
  return tokens;
}

/// How per-text type indices map into token labels when assembling a corpus.
/// full_overlap: index k is the same word in every text (nested vocabularies).
/// disjoint: every text gets its own namespace.
/// random_overlap: index k of text t maps to the shared word with probability
///   q, independently per (text, index), else to a private word.
/// shared_core: indices up to core_size are shared, the rest are private;
///   mimics a common function-word core with topic-specific tails.
struct VocabularySharing {
  enum class Policy { full_overlap, disjoint, random_overlap, shared_core };
  Policy policy = Policy::full_overlap;
  double q = 0.0;                // random_overlap only
  std::uint64_t core_size = 0;   // shared_core only
  std::uint64_t seed = 0;        // random_overlap coin flips
};

/// Generates one text per config and maps them into a common label space.
inline Corpus synthesize_corpus(std::span<const GeneratorConfig> configs,
                                const VocabularySharing& sharing) {
  if (configs.empty()) fail("corpus synthesis needs at least one generator config");
  using Policy = VocabularySharing::Policy;
  if (sharing.policy == Policy::random_overlap && !(sharing.q >= 0.0 && sharing.q <= 1.0)) {
    fail(strfmt("overlap probability must lie in [0, 1], got %g", sharing.q));
  }
  std::vector<Text> texts;
  texts.reserve(configs.size());
  for (std::size_t t = 0; t < configs.size(); ++t) {
    auto ids = generate_type_sequence(configs[t]);
    std::uint32_t n_types = 0;
    for (std::uint32_t k : ids) n_types = std::max(n_types, k);
    // one coin per (text, index), hashed so draws are order-independent
    std::vector<std::uint8_t> shared(n_types + 1, 1);
    for (std::uint32_t k = 1; k <= n_types; ++k) {
      switch (sharing.policy) {
        case Policy::full_overlap:
          break;
        case Policy::disjoint:
          shared[k] = 0;
          break;
        case Policy::shared_core:
          shared[k] = k <= sharing.core_size;
          break;
        case Policy::random_overlap: {
          std::uint64_t stream = (static_cast<std::uint64_t>(t) << 32) | k;
          double u = static_cast<double>(derive_seed(sharing.seed, stream) >> 11) * 0x1.0p-53;
          shared[k] = u < sharing.q;
          break;
        }
      }
    }
    std::string text_id = strfmt("text%03zu", t + 1);
    std::string prefix = strfmt("t%03zu", t + 1);
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (std::uint32_t k : ids) {
      tokens.push_back(shared[k] ? type_label(k) : prefix + type_label(k));
    }
    texts.push_back(make_text(std::move(text_id), std::move(tokens)));
  }
  return make_corpus(std::move(texts));
}

}  // namespace textmix
