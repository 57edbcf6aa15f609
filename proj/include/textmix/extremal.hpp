#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/mixing.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"
#include "textmix/rng.hpp"

namespace textmix {

/// Distribution of the number of repeat tokens between consecutive new words
/// when i of j remaining tokens are repeats:
/// P(M) = hazard(M) * prod_{k<M} (i-k)/(j-k), hazard = (j-i)/(j-M).
struct GapDistribution {
  std::vector<double> pmf;  // index M = 0..min(floor(i), max_terms)
  double mean = 0.0;
};

inline GapDistribution gap_distribution(double repeats, double remaining,
                                        std::size_t max_terms = 1000) {
  if (!(remaining > 0.0)) fail("remaining token count must be positive");
  if (repeats < 0.0 || repeats > remaining) {
    fail(strfmt("repeat count must lie in [0, remaining], got %g of %g", repeats, remaining));
  }
  auto m_max = static_cast<std::size_t>(std::floor(repeats + 1e-9));
  if (m_max > max_terms) m_max = max_terms;
  GapDistribution gd;
  gd.pmf.reserve(m_max + 1);
  double survival = 1.0;  // prod_{k<M} (i-k)/(j-k)
  for (std::size_t m = 0; m <= m_max; ++m) {
    double denom = remaining - static_cast<double>(m);
    double hazard = denom > 0.0 ? (remaining - repeats) / denom : 1.0;
    double mass = survival * hazard;
    if (mass < 0.0) mass = 0.0;
    gd.pmf.push_back(mass);
    gd.mean += static_cast<double>(m) * mass;
    if (denom > 0.0) {
      survival *= (repeats - static_cast<double>(m)) / denom;
      if (survival < 0.0) survival = 0.0;
    } else {
      survival = 0.0;
    }
  }
  return gd;
}

/// Expected waits between new words for the extremal null order (all texts
/// one word long, so the memoryless count equals the token position).
struct ExtremalProfile {
  AlphaProfile profile;                 // alpha(1) = 1, alpha(n+1) = 1/(1 + gap_mean[n-1])
  std::vector<double> gap_mean;         // expected repeats before new word n+1, n = 1..V-1
  std::vector<double> gap_se;           // Monte Carlo standard errors; empty for analytic
  std::vector<double> expected_position;  // expected token position of new word n
};

namespace detail {

inline std::vector<std::uint64_t> integral_counts(const RankFrequencyDistribution& d) {
  std::vector<std::uint64_t> counts;
  counts.reserve(d.size());
  for (std::size_t r = 0; r < d.size(); ++r) {
    double f = d.frequency[r];
    double rounded = std::floor(f + 0.5);
    if (std::fabs(f - rounded) > 1e-6 || rounded < 1.0) {
      fail(strfmt("extremal analysis needs integer counts >= 1 (rank %zu has %g)", r + 1, f));
    }
    counts.push_back(static_cast<std::uint64_t>(rounded));
  }
  return counts;
}

inline void finish_extremal_profile(ExtremalProfile& out, std::size_t n_types) {
  out.profile.alpha.resize(n_types);
  out.profile.mean_memoryless.resize(n_types);
  out.expected_position.resize(n_types);
  out.profile.alpha[0] = 1.0;
  out.expected_position[0] = 1.0;
  for (std::size_t n = 1; n < n_types; ++n) {
    out.profile.alpha[n] = 1.0 / (1.0 + out.gap_mean[n - 1]);
    out.expected_position[n] = out.expected_position[n - 1] + 1.0 + out.gap_mean[n - 1];
  }
  out.profile.mean_memoryless = out.expected_position;
  out.profile.regimes = RegimeBoundaries{std::nullopt, 1, 1.0, 1};
}

}  // namespace detail

/// Deterministic profile: tracks per-type survival probabilities while
/// drawing tokens one at a time, then plugs the expected composition of the
/// remaining stream into the gap distribution.
inline ExtremalProfile extremal_alpha_analytic(const RankFrequencyDistribution& d,
                                               std::size_t max_terms = 1000) {
  auto counts = detail::integral_counts(d);
  // group type survivals by count value; all types with equal count evolve identically
  std::map<std::uint64_t, double> multiplicity;
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) {
    multiplicity[c] += 1.0;
    total += c;
  }
  std::size_t n_types = counts.size();
  ExtremalProfile out;
  out.profile.method = "analytic";
  out.profile.runs = 0;
  out.gap_mean.reserve(n_types == 0 ? 0 : n_types - 1);
  double m_total = static_cast<double>(total);

  std::vector<double> group_count, group_mult, group_q;
  for (const auto& [c, mult] : multiplicity) {
    group_count.push_back(static_cast<double>(c));
    group_mult.push_back(mult);
    group_q.push_back(1.0);  // probability a type of this count is still unseen
  }
  std::uint64_t drawn = 0;
  auto expected_distinct = [&] {
    double sum = 0.0;
    for (std::size_t g = 0; g < group_q.size(); ++g) sum += group_mult[g] * (1.0 - group_q[g]);
    return sum;
  };
  auto expected_unseen_tokens = [&] {
    double sum = 0.0;
    for (std::size_t g = 0; g < group_q.size(); ++g) {
      sum += group_mult[g] * group_count[g] * group_q[g];
    }
    return sum;
  };
  for (std::size_t n = 1; n < n_types; ++n) {
    while (expected_distinct() < static_cast<double>(n) && drawn + 1 < total) {
      double left = m_total - static_cast<double>(drawn);
      for (std::size_t g = 0; g < group_q.size(); ++g) {
        double factor = (left - group_count[g]) / left;
        group_q[g] = factor > 0.0 ? group_q[g] * factor : 0.0;
      }
      ++drawn;
    }
    double remaining = m_total - static_cast<double>(drawn);
    double repeats = remaining - expected_unseen_tokens();
    if (repeats < 0.0) repeats = 0.0;
    if (repeats > remaining) repeats = remaining;
    out.gap_mean.push_back(gap_distribution(repeats, remaining, max_terms).mean);
  }
  detail::finish_extremal_profile(out, n_types);
  return out;
}

/// Monte Carlo companion: shuffles the token multiset whole and measures
/// gaps between consecutive new words directly.
inline ExtremalProfile extremal_alpha_mc(const RankFrequencyDistribution& d, std::size_t runs,
                                         std::uint64_t seed, unsigned threads = 1) {
  if (runs == 0) fail("Monte Carlo extremal profile needs at least one run");
  auto counts = detail::integral_counts(d);
  std::size_t n_types = counts.size();
  std::vector<std::uint32_t> base;
  for (std::size_t r = 0; r < n_types; ++r) {
    for (std::uint64_t k = 0; k < counts[r]; ++k) base.push_back(static_cast<std::uint32_t>(r));
  }
  std::size_t n_gaps = n_types > 0 ? n_types - 1 : 0;
  unsigned workers = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> gap_sum(workers, std::vector<std::uint64_t>(n_gaps, 0));
  std::vector<std::vector<std::uint64_t>> gap_sq(workers, std::vector<std::uint64_t>(n_gaps, 0));
  std::vector<std::vector<std::uint64_t>> pos_sum(workers, std::vector<std::uint64_t>(n_types, 0));
  parallel_chunks(runs, threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
    std::vector<std::uint32_t> tokens(base);
    std::vector<std::uint32_t> stamp(n_types, 0);
    std::uint32_t epoch = 0;
    for (std::size_t run = begin; run < end; ++run) {
      // Each run shuffles from the canonical arrangement so results depend
      // only on the run's derived seed, not on worker chunking.
      std::copy(base.begin(), base.end(), tokens.begin());
      auto rng = make_rng(derive_seed(seed, run));
      fisher_yates(std::span<std::uint32_t>(tokens), rng);
      ++epoch;
      std::size_t seen = 0;
      std::uint64_t last_event_pos = 0;
      for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        std::uint32_t id = tokens[pos];
        if (stamp[id] == epoch) continue;
        stamp[id] = epoch;
        ++seen;
        std::uint64_t here = pos + 1;
        pos_sum[w][seen - 1] += here;
        if (seen >= 2) {
          std::uint64_t gap = here - last_event_pos - 1;
          gap_sum[w][seen - 2] += gap;
          gap_sq[w][seen - 2] += gap * gap;
        }
        last_event_pos = here;
        if (seen == n_types) break;
      }
    }
  });
  for (std::size_t w = 1; w < gap_sum.size(); ++w) {
    for (std::size_t k = 0; k < n_gaps; ++k) {
      gap_sum[0][k] += gap_sum[w][k];
      gap_sq[0][k] += gap_sq[w][k];
    }
    for (std::size_t k = 0; k < n_types; ++k) pos_sum[0][k] += pos_sum[w][k];
  }
  ExtremalProfile out;
  out.profile.method = "mc";
  out.profile.runs = runs;
  out.gap_mean.resize(n_gaps);
  out.gap_se.resize(n_gaps);
  double r = static_cast<double>(runs);
  for (std::size_t k = 0; k < n_gaps; ++k) {
    double mean = static_cast<double>(gap_sum[0][k]) / r;
    out.gap_mean[k] = mean;
    double var = runs > 1
                     ? (static_cast<double>(gap_sq[0][k]) - r * mean * mean) / (r - 1.0)
                     : 0.0;
    if (var < 0.0) var = 0.0;
    out.gap_se[k] = std::sqrt(var / r);
  }
  detail::finish_extremal_profile(out, n_types);
  for (std::size_t k = 0; k < n_types; ++k) {
    out.expected_position[k] = static_cast<double>(pos_sum[0][k]) / r;
  }
  out.profile.mean_memoryless = out.expected_position;
  return out;
}

}  // namespace textmix
