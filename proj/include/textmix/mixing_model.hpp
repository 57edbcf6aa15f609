#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/mixing.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"

namespace textmix {

/// Predicted rank distribution p_hat(n) = alpha(n) n^-theta / C.
struct MixingModel {
  double theta = 0.0;
  double normalizer = 0.0;  // C, the sum that makes p_hat total 1
  std::vector<double> p_hat;
  double sse = 0.0;                          // log10 SSE over eval_ranks
  std::vector<std::size_t> eval_ranks;       // empty unless theta was scanned
  std::vector<double> pointwise_sq_error;    // matches eval_ranks
};

inline std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  grid.reserve(501);
  for (int k = 0; k <= 500; ++k) grid.push_back(static_cast<double>(750 + k) / 1000.0);
  return grid;
}

/// Builds the predicted distribution for a fixed decay exponent.
inline MixingModel build_model(const AlphaProfile& profile, double theta) {
  if (profile.alpha.empty()) fail("profile must be non-empty");
  MixingModel model;
  model.theta = theta;
  model.p_hat.resize(profile.alpha.size());
  double total = 0.0;
  for (std::size_t k = 0; k < profile.alpha.size(); ++k) {
    double value = profile.alpha[k] * std::pow(static_cast<double>(k + 1), -theta);
    model.p_hat[k] = value;
    total += value;
  }
  if (!(total > 0.0)) fail("model normalizer must be positive");
  model.normalizer = total;
  for (double& v : model.p_hat) v /= total;
  return model;
}

/// Squared errors (p(r) - p_hat(r))^2 of the model against an observed
/// distribution at the given ranks. Both inputs share the rank domain.
inline std::vector<double> pointwise_error(const NormalizedDistribution& p,
                                           const MixingModel& model,
                                           std::span<const std::size_t> ranks) {
  if (p.size() != model.p_hat.size()) {
    fail(strfmt("distribution has %zu ranks but model has %zu", p.size(), model.p_hat.size()));
  }
  std::vector<double> errors;
  errors.reserve(ranks.size());
  for (std::size_t r : ranks) {
    if (r < 1 || r > p.size()) fail(strfmt("rank %zu out of range", r));
    double diff = p.p[r - 1] - model.p_hat[r - 1];
    errors.push_back(diff * diff);
  }
  return errors;
}

/// Scans the exponent grid and keeps the model with least squared log10
/// error over a log-spaced rank subsample; ties go to the smaller theta.
inline MixingModel select_theta(const AlphaProfile& profile, const NormalizedDistribution& p,
                                std::span<const double> grid = {},
                                std::size_t max_ranks = 10000, unsigned threads = 1) {
  if (profile.alpha.size() != p.size()) {
    fail(strfmt("profile spans %zu types but distribution has %zu ranks", profile.alpha.size(),
                p.size()));
  }
  std::vector<double> default_grid;
  if (grid.empty()) {
    default_grid = default_theta_grid();
    grid = default_grid;
  }
  auto ranks = log_spaced_ranks(p.size(), max_ranks);
  std::vector<double> log_p(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    double value = p.p[ranks[i] - 1];
    if (!(value > 0.0)) fail(strfmt("zero probability at rank %zu", ranks[i]));
    log_p[i] = std::log10(value);
  }
  std::vector<double> log_n(profile.alpha.size());
  for (std::size_t k = 0; k < log_n.size(); ++k) {
    log_n[k] = std::log(static_cast<double>(k + 1));
  }

  struct Best {
    double sse = 0.0;
    std::size_t index = 0;
    bool found = false;
  };
  std::vector<Best> best_per_worker(resolve_threads(threads));
  parallel_chunks(grid.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
    std::vector<double> weight(profile.alpha.size());
    Best local;
    for (std::size_t g = begin; g < end; ++g) {
      double theta = grid[g];
      double total = 0.0;
      for (std::size_t k = 0; k < weight.size(); ++k) {
        weight[k] = profile.alpha[k] * std::exp(-theta * log_n[k]);
        total += weight[k];
      }
      double log_total = std::log10(total);
      double sse = 0.0;
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        double log_phat = std::log10(weight[ranks[i] - 1]) - log_total;
        double diff = log_p[i] - log_phat;
        sse += diff * diff;
      }
      if (!local.found || sse < local.sse) local = {sse, g, true};
    }
    best_per_worker[w] = local;
  });
  Best best;
  for (const auto& cand : best_per_worker) {
    if (!cand.found) continue;
    if (!best.found || cand.sse < best.sse || (cand.sse == best.sse && cand.index < best.index)) {
      best = cand;
    }
  }
  if (!best.found) fail("exponent grid must be non-empty");

  MixingModel model = build_model(profile, grid[best.index]);
  model.eval_ranks = std::move(ranks);
  model.sse = 0.0;
  for (std::size_t i = 0; i < model.eval_ranks.size(); ++i) {
    double diff = log_p[i] - std::log10(model.p_hat[model.eval_ranks[i] - 1]);
    model.sse += diff * diff;
  }
  model.pointwise_sq_error = pointwise_error(p, model, model.eval_ranks);
  return model;
}

}  // namespace textmix
