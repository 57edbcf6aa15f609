#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/corpus.hpp"
#include "textmix/extremal.hpp"
#include "textmix/mixing.hpp"
#include "textmix/mixing_model.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"
#include "textmix/scaling_fit.hpp"

namespace textmix {

struct DecileConfig {
  std::size_t books_per_sample = 50;
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  ScanOptions scan;
  unsigned threads = 1;
};

/// Reduced protocol sized for quick runs on a workstation.
inline DecileConfig desk_scale_config(std::uint64_t seed) {
  DecileConfig config;
  config.books_per_sample = 20;
  config.n_samples = 20;
  config.seed = seed;
  return config;
}

struct DecileRow {
  int decile = 0;
  int sample_id = 0;
  std::size_t break_rank = 0;
  double gamma = 0.0;
  double theta = 0.0;
  double mean_types = 0.0;  // mean per-text vocabulary of the sample
};

struct DecileExperimentResult {
  std::vector<DecileRow> rows;
  DecileConfig config;
  std::vector<int> skipped_deciles;     // populations too small to sample
  std::vector<std::string> warnings;
};

/// Break-rank survey: repeatedly samples books from each vocabulary decile,
/// pools their tokens, and records the fitted break alongside the sample's
/// mean vocabulary. Row order and contents are deterministic under the seed.
inline DecileExperimentResult run_decile_experiment(const Corpus& corpus,
                                                    const DecileConfig& config) {
  if (config.books_per_sample == 0) fail("books_per_sample must be positive");
  if (config.n_samples == 0) fail("n_samples must be positive");
  DecileExperimentResult result;
  result.config = config;
  auto deciles = decile_partition(corpus);
  ScanOptions scan = config.scan;
  scan.threads = 1;  // samples parallelize; keep each scan serial
  for (int d = 1; d <= 10; ++d) {
    const auto& pool = deciles[static_cast<std::size_t>(d - 1)];
    if (pool.size() < config.books_per_sample) {
      result.skipped_deciles.push_back(d);
      result.warnings.push_back(strfmt("decile %d holds %zu texts, need %zu; skipped", d,
                                       pool.size(), config.books_per_sample));
      continue;
    }
    std::vector<std::optional<DecileRow>> rows(config.n_samples);
    std::vector<std::string> sample_warnings(config.n_samples);
    parallel_for(config.n_samples, config.threads, [&](std::size_t s, std::size_t) {
      auto picks = detail::decile_sample_picks(pool, config.books_per_sample, d, s, config.seed);
      std::vector<std::string> pooled;
      std::size_t total = 0;
      for (std::size_t idx : picks) total += corpus.texts[idx].tokens.size();
      pooled.reserve(total);
      double type_sum = 0.0;
      for (std::size_t idx : picks) {
        const Text& text = corpus.texts[idx];
        pooled.insert(pooled.end(), text.tokens.begin(), text.tokens.end());
        type_sum += static_cast<double>(text.type_count);
      }
      try {
        auto fit = scan_break(rank_frequency(pooled), scan);
        DecileRow row;
        row.decile = d;
        row.sample_id = static_cast<int>(s);
        row.break_rank = fit.break_rank;
        row.gamma = fit.gamma;
        row.theta = fit.theta;
        row.mean_types = type_sum / static_cast<double>(config.books_per_sample);
        rows[s] = row;
      } catch (const Error& e) {
        sample_warnings[s] = strfmt("decile %d sample %zu: %s", d, s, e.what());
      }
    });
    for (std::size_t s = 0; s < config.n_samples; ++s) {
      if (rows[s]) {
        result.rows.push_back(*rows[s]);
      } else {
        result.warnings.push_back(sample_warnings[s]);
      }
    }
  }
  return result;
}

/// A named way to cut one parent text into pieces: ascending token offsets
/// strictly inside (0, token_count); empty means the whole text.
struct RefinementSpec {
  std::string name;
  std::vector<std::size_t> split_offsets;
};

/// Splits the parent at the offsets and returns one text per piece.
inline Corpus refine_text(const Text& parent, const RefinementSpec& spec) {
  std::size_t total = parent.tokens.size();
  std::size_t prev = 0;
  for (std::size_t offset : spec.split_offsets) {
    if (offset <= prev || offset >= total) {
      fail(strfmt("refinement '%s' does not partition the text: offset %zu (length %zu)",
                  spec.name.c_str(), offset, total));
    }
    prev = offset;
  }
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  bounds.insert(bounds.end(), spec.split_offsets.begin(), spec.split_offsets.end());
  bounds.push_back(total);
  std::vector<Text> pieces;
  pieces.reserve(bounds.size() - 1);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    std::vector<std::string> tokens(parent.tokens.begin() + bounds[k],
                                    parent.tokens.begin() + bounds[k + 1]);
    pieces.push_back(make_text(strfmt("%s_%03zu", parent.id.c_str(), k + 1), std::move(tokens)));
  }
  return make_corpus(std::move(pieces));
}

struct RefinementReport {
  std::string name;
  std::size_t pieces = 0;
  double theta = 0.0;
  double sse = 0.0;
  double normalizer = 0.0;
  std::optional<double> mu;  // decay fit over [mean_types, corpus_types] when possible
  std::size_t runs = 0;
};

/// Compares progressively finer cuts of one text: for each refinement, mix
/// the pieces, select the exponent against the parent's distribution, and
/// report model quality. Optionally appends the word-level extremal limit.
inline std::vector<RefinementReport> run_refinement_study(const Text& parent,
                                                          std::span<const RefinementSpec> specs,
                                                          std::size_t runs, std::uint64_t seed,
                                                          bool include_extremal = true,
                                                          unsigned threads = 1) {
  if (specs.empty() && !include_extremal) fail("refinement study needs at least one spec");
  auto parent_dist = rank_frequency(parent.tokens);
  auto p = normalize(parent_dist);
  std::vector<RefinementReport> reports;
  reports.reserve(specs.size() + 1);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Corpus pieces = refine_text(parent, specs[i]);
    auto profile = run_mixing(pieces, runs, derive_seed(seed, i), threads);
    if (profile.alpha.size() != p.size()) {
      fail(strfmt("refinement '%s' changed the vocabulary (%zu vs %zu types)",
                  specs[i].name.c_str(), profile.alpha.size(), p.size()));
    }
    auto model = select_theta(profile, p, {}, 10000, threads);
    RefinementReport report;
    report.name = specs[i].name;
    report.pieces = pieces.size();
    report.theta = model.theta;
    report.sse = model.sse;
    report.normalizer = model.normalizer;
    report.runs = profile.runs;
    if (profile.regimes) {
      try {
        report.mu = fit_mu(profile.alpha, profile.regimes->mean_types,
                           static_cast<double>(profile.alpha.size())).mu;
      } catch (const Error&) {
        report.mu = std::nullopt;
      }
    }
    reports.push_back(std::move(report));
  }
  if (include_extremal) {
    auto extremal = extremal_alpha_analytic(parent_dist);
    auto model = select_theta(extremal.profile, p, {}, 10000, threads);
    RefinementReport report;
    report.name = "extremal";
    report.pieces = parent.tokens.size();
    report.theta = model.theta;
    report.sse = model.sse;
    report.normalizer = model.normalizer;
    report.runs = 0;
    try {
      report.mu = fit_mu(extremal.profile.alpha, 1.0,
                         static_cast<double>(extremal.profile.alpha.size())).mu;
    } catch (const Error&) {
      report.mu = std::nullopt;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace textmix
