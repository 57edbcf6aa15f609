#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "textmix/common.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"

namespace textmix {

/// Two least-squares lines constrained to meet at x_b:
/// y = beta1 + beta2 x for x <= x_b, y = beta3 + beta4 x for x > x_b.
struct TwoLineFit {
  double beta1 = 0.0, beta2 = 0.0;
  double beta3 = 0.0, beta4 = 0.0;
  double x_b = 0.0;
  double sse = 0.0;
};

namespace detail {

// Solves the 3x3 system a * x = rhs in place, partial pivoting.
inline void solve3(double a[3][3], double rhs[3], double out[3]) {
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::fabs(a[perm[row]][col]) > std::fabs(a[perm[pivot]][col])) pivot = row;
    }
    std::swap(perm[col], perm[pivot]);
    double diag = a[perm[col]][col];
    if (std::fabs(diag) < 1e-12) fail("two-line fit is singular; not enough spread in x");
    for (int row = col + 1; row < 3; ++row) {
      double factor = a[perm[row]][col] / diag;
      for (int k = col; k < 3; ++k) a[perm[row]][k] -= factor * a[perm[col]][k];
      rhs[perm[row]] -= factor * rhs[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double acc = rhs[perm[col]];
    for (int k = col + 1; k < 3; ++k) acc -= a[perm[col]][k] * out[k];
    out[col] = acc / a[perm[col]][col];
  }
}

}  // namespace detail

/// Continuous broken-line least squares at a fixed break abscissa.
/// Parameterized as y = c + s_l (x - x_b) left of the break and
/// y = c + s_r (x - x_b) right of it, which enforces continuity exactly.
/// Needs at least two points strictly on each side's fitting set.
inline TwoLineFit fit_two_line(std::span<const double> x, std::span<const double> y, double x_b) {
  if (x.size() != y.size()) fail("x and y must have equal length");
  double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double rhs[3] = {0, 0, 0};
  std::size_t n_left = 0, n_right = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - x_b;
    bool left = x[i] <= x_b;
    (left ? n_left : n_right) += 1;
    double bl = left ? dx : 0.0;
    double br = left ? 0.0 : dx;
    a[0][0] += 1.0;
    a[0][1] += bl;
    a[0][2] += br;
    a[1][1] += bl * bl;
    a[2][2] += br * br;
    rhs[0] += y[i];
    rhs[1] += bl * y[i];
    rhs[2] += br * y[i];
  }
  if (n_left < 2 || n_right < 2) {
    fail(strfmt("two-line fit needs >= 2 points per side, got %zu | %zu", n_left, n_right));
  }
  a[1][0] = a[0][1];
  a[2][0] = a[0][2];
  a[1][2] = a[2][1] = 0.0;
  double params[3];
  detail::solve3(a, rhs, params);
  TwoLineFit fit;
  fit.x_b = x_b;
  fit.beta2 = params[1];
  fit.beta4 = params[2];
  fit.beta1 = params[0] - params[1] * x_b;
  fit.beta3 = params[0] - params[2] * x_b;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double slope = (x[i] <= x_b) ? params[1] : params[2];
    double resid = y[i] - (params[0] + slope * (x[i] - x_b));
    sse += resid * resid;
  }
  fit.sse = sse;
  return fit;
}

struct ScanOptions {
  std::size_t candidates = 1000;       // break positions tried
  double window_lo = 0.2;              // candidate window, fraction of log10(N)
  double window_hi = 0.8;
  std::size_t max_ranks = 10000;       // log-spaced rank subsample cap
  unsigned threads = 1;
};

/// Break-rank scan result over log10 rank vs log10 frequency.
struct BrokenPowerLawFit {
  double theta = 0.0;           // upper-regime exponent (= -beta2)
  double gamma = 0.0;           // lower-regime exponent (= -beta4)
  std::size_t break_rank = 0;   // round(10^x_b)
  double sse = 0.0;
  TwoLineFit line;
  std::size_t sampled_ranks = 0;
  ScanOptions options;
};

/// Scans candidate break positions uniform in [window_lo, window_hi] of
/// log10(N) and keeps the least-squares winner; ties go to the smaller break.
inline BrokenPowerLawFit scan_break(const RankFrequencyDistribution& d, ScanOptions options = {}) {
  if (d.size() < 10) fail(strfmt("break scan needs >= 10 ranks, got %zu", d.size()));
  if (!(options.window_lo > 0.0 && options.window_lo < options.window_hi &&
        options.window_hi < 1.0)) {
    fail("break window must satisfy 0 < lo < hi < 1");
  }
  if (options.candidates < 2) fail("break scan needs >= 2 candidates");
  if (d.frequency.front() == d.frequency.back()) {
    fail("distribution has no scaling structure (all frequencies equal)");
  }
  auto ranks = log_spaced_ranks(d.size(), options.max_ranks);
  std::vector<double> x(ranks.size()), y(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    x[i] = std::log10(static_cast<double>(ranks[i]));
    y[i] = std::log10(d.frequency[ranks[i] - 1]);
  }
  double span = std::log10(static_cast<double>(d.size()));
  double lo = options.window_lo * span;
  double hi = options.window_hi * span;
  std::size_t n_cand = options.candidates;
  auto candidate_x = [&](std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_cand - 1);
  };

  struct Best {
    double sse = 0.0;
    std::size_t index = 0;
    bool found = false;
  };
  std::vector<Best> best_per_worker(resolve_threads(options.threads));
  parallel_chunks(n_cand, options.threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
    Best local;
    for (std::size_t i = begin; i < end; ++i) {
      double xb = candidate_x(i);
      std::size_t n_left = 0;
      for (double xi : x) n_left += (xi <= xb) ? 1 : 0;
      if (n_left < 2 || x.size() - n_left < 2) continue;
      TwoLineFit fit = fit_two_line(x, y, xb);
      if (!local.found || fit.sse < local.sse) {
        local = {fit.sse, i, true};
      }
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
  if (!best.found) fail("no candidate break had two points on each side");

  BrokenPowerLawFit out;
  out.line = fit_two_line(x, y, candidate_x(best.index));
  out.theta = -out.line.beta2;
  out.gamma = -out.line.beta4;
  out.break_rank = static_cast<std::size_t>(std::llround(std::pow(10.0, out.line.x_b)));
  if (out.break_rank < 1) out.break_rank = 1;
  out.sse = out.line.sse;
  out.sampled_ranks = ranks.size();
  out.options = options;
  return out;
}

struct MuFit {
  double mu = 0.0;         // decay exponent (= -slope in log10-log10)
  double intercept = 0.0;  // log10 alpha at n = 1
  double n_lo = 0.0, n_hi = 0.0;
  std::size_t points = 0;
};

/// Log-log least squares of an introduction-rate profile over n in
/// [n_lo, n_hi]. alpha values are indexed so alpha[k] belongs to n = k+1.
inline MuFit fit_mu(std::span<const double> alpha, double n_lo, double n_hi) {
  if (!(n_lo >= 1.0) || !(n_hi >= n_lo)) fail("fit range must satisfy 1 <= n_lo <= n_hi");
  std::size_t lo = static_cast<std::size_t>(std::ceil(n_lo));
  std::size_t hi = static_cast<std::size_t>(std::floor(n_hi));
  if (hi > alpha.size()) hi = alpha.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t n = lo; n <= hi; ++n) {
    double a = alpha[n - 1];
    if (!(a > 0.0)) fail(strfmt("profile must be positive to fit in log space (n = %zu)", n));
    double xv = std::log10(static_cast<double>(n));
    double yv = std::log10(a);
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    ++count;
  }
  if (count < 10) fail(strfmt("decay fit needs >= 10 profile points in range, got %zu", count));
  double denom = static_cast<double>(count) * sxx - sx * sx;
  if (std::fabs(denom) < 1e-12) fail("decay fit is singular; not enough spread in n");
  double slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
  MuFit fit;
  fit.mu = -slope;
  fit.intercept = (sy - slope * sx) / static_cast<double>(count);
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;
  fit.points = count;
  return fit;
}

}  // namespace textmix
