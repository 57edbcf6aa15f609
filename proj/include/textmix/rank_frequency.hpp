#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "textmix/common.hpp"

namespace textmix {

/// Frequencies indexed by rank (rank r lives at index r-1), nonincreasing.
struct RankFrequencyDistribution {
  std::vector<double> frequency;
  std::vector<std::string> label;  // empty, or one label per rank
  double total = 0.0;

  std::size_t size() const { return frequency.size(); }
};

struct NormalizedDistribution {
  std::vector<double> p;  // nonincreasing, sums to 1

  std::size_t size() const { return p.size(); }
};

/// Wraps precomputed frequencies, validating rank order and positivity.
inline RankFrequencyDistribution make_distribution(std::vector<double> frequency,
                                                   std::vector<std::string> label = {}) {
  if (frequency.empty()) fail("distribution must have at least one rank");
  if (!label.empty() && label.size() != frequency.size()) {
    fail("label list must be empty or match the number of ranks");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    if (!(frequency[i] > 0.0)) fail(strfmt("frequency at rank %zu must be positive", i + 1));
    if (i > 0 && frequency[i] > frequency[i - 1]) {
      fail(strfmt("frequencies must be nonincreasing (rank %zu)", i + 1));
    }
    total += frequency[i];
  }
  RankFrequencyDistribution d;
  d.frequency = std::move(frequency);
  d.label = std::move(label);
  d.total = total;
  return d;
}

/// Tallies a token stream. Ties in count break alphabetically so ranks are
/// reproducible across runs and platforms.
inline RankFrequencyDistribution rank_frequency(std::span<const std::string> tokens) {
  if (tokens.empty()) fail("cannot rank an empty token stream");
  std::unordered_map<std::string_view, std::uint64_t> counts;
  counts.reserve(tokens.size());
  for (const auto& t : tokens) ++counts[t];
  std::vector<std::pair<std::string_view, std::uint64_t>> order(counts.begin(), counts.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  RankFrequencyDistribution d;
  d.frequency.reserve(order.size());
  d.label.reserve(order.size());
  for (const auto& [token, count] : order) {
    d.frequency.push_back(static_cast<double>(count));
    d.label.emplace_back(token);
  }
  d.total = static_cast<double>(tokens.size());
  return d;
}

inline NormalizedDistribution normalize(const RankFrequencyDistribution& d) {
  if (d.frequency.empty()) fail("cannot normalize an empty distribution");
  NormalizedDistribution out;
  out.p.reserve(d.frequency.size());
  for (double f : d.frequency) out.p.push_back(f / d.total);
  return out;
}

/// Up to `target` distinct ranks spread evenly in log10 over [1, n_ranks].
/// Always includes rank 1 and rank n_ranks.
inline std::vector<std::size_t> log_spaced_ranks(std::size_t n_ranks, std::size_t target) {
  if (n_ranks == 0) fail("rank count must be positive");
  if (target == 0) fail("target count must be positive");
  std::vector<std::size_t> ranks;
  if (n_ranks == 1 || target == 1) {
    ranks.push_back(1);
    if (n_ranks > 1) ranks.push_back(n_ranks);
    return ranks;
  }
  double span = std::log10(static_cast<double>(n_ranks));
  for (std::size_t i = 0; i < target; ++i) {
    double x = span * static_cast<double>(i) / static_cast<double>(target - 1);
    auto r = static_cast<std::size_t>(std::floor(std::pow(10.0, x) + 0.5));
    if (r < 1) r = 1;
    if (r > n_ranks) r = n_ranks;
    if (ranks.empty() || r > ranks.back()) ranks.push_back(r);
  }
  if (ranks.back() != n_ranks) ranks.push_back(n_ranks);
  return ranks;
}

/// Pure power-law surrogate with the same vocabulary size and token volume:
/// f(r) = round((r/N)^-(1 - N/M)). Requires N <= M.
inline RankFrequencyDistribution idealize(std::size_t n_types, double total_tokens,
                                          std::vector<std::string> label = {}) {
  if (n_types == 0) fail("idealize needs at least one type");
  double n = static_cast<double>(n_types);
  if (n > total_tokens) {
    fail(strfmt("idealize needs token volume >= vocabulary size (%zu > %.0f)", n_types,
                total_tokens));
  }
  double exponent = 1.0 - n / total_tokens;
  std::vector<double> frequency(n_types);
  for (std::size_t r = 1; r <= n_types; ++r) {
    frequency[r - 1] = std::floor(std::pow(static_cast<double>(r) / n, -exponent) + 0.5);
  }
  return make_distribution(std::move(frequency), std::move(label));
}

inline RankFrequencyDistribution idealize(const RankFrequencyDistribution& d) {
  return idealize(d.size(), d.total, d.label);
}

}  // namespace textmix
