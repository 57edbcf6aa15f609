#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. Everything here favors obviousness over speed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "textmix/corpus.hpp"

namespace oracles {

// Set-based mixing walk: returns (growing, memoryless) counts per position.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> naive_mixing_series(
    const std::vector<const textmix::Text*>& order) {
  std::set<std::string> corpus_seen;
  std::uint64_t memoryless = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> series;
  for (const auto* text : order) {
    std::set<std::string> text_seen;
    for (const auto& token : text->tokens) {
      if (text_seen.insert(token).second) ++memoryless;
      corpus_seen.insert(token);
      series.emplace_back(corpus_seen.size(), memoryless);
    }
  }
  return series;
}

// Memoryless count at the first position where the growing count reaches n.
inline std::vector<std::uint64_t> naive_trace(const std::vector<const textmix::Text*>& order) {
  auto series = naive_mixing_series(order);
  std::vector<std::uint64_t> trace;
  std::uint64_t reached = 0;
  for (const auto& [n, m] : series) {
    if (n > reached) {
      trace.push_back(m);
      reached = n;
    }
  }
  return trace;
}

// Expected gap (repeats between consecutive new words) under a uniform
// shuffle of the whole token multiset, by exhaustive enumeration over
// distinct arrangements. Entry n-1 is the expected gap between new word n
// and new word n+1. Equal weights per distinct arrangement are exact:
// every arrangement corresponds to the same number of underlying orderings.
inline std::vector<double> enumerate_gap_means(const std::map<std::string, std::uint64_t>& counts) {
  std::vector<std::string> tokens;
  for (const auto& [word, count] : counts) {
    for (std::uint64_t c = 0; c < count; ++c) tokens.push_back(word);
  }
  std::sort(tokens.begin(), tokens.end());
  std::size_t n_types = counts.size();
  std::vector<double> gap_sum(n_types >= 1 ? n_types - 1 : 0, 0.0);
  double arrangements = 0.0;
  do {
    ++arrangements;
    std::set<std::string> seen;
    std::size_t last_new = 0;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
      if (seen.insert(tokens[pos]).second) {
        std::size_t n = seen.size();
        if (n >= 2) gap_sum[n - 2] += static_cast<double>(pos - last_new - 1);
        last_new = pos;
      }
    }
  } while (std::next_permutation(tokens.begin(), tokens.end()));
  for (double& g : gap_sum) g /= arrangements;
  return gap_sum;
}

struct OlsLine {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

inline OlsLine ols(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  OlsLine line;
  line.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  line.intercept = (sy - line.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (line.intercept + line.slope * x[i]);
    line.sse += r * r;
  }
  return line;
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = base / ("textmix_test_" + std::to_string(rd()));
      if (std::filesystem::create_directory(candidate)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// The two worked-example excerpts used across the suite.
inline textmix::Text excerpt_best() {
  return textmix::make_text(
      "t1", {"it", "was", "the", "best", "of", "times", "it", "was", "the", "worst", "of",
             "times"});
}

inline textmix::Text excerpt_age() {
  return textmix::make_text(
      "t2", {"it", "was", "the", "age", "of", "wisdom", "it", "was", "the", "age", "of",
             "foolishness"});
}

inline textmix::Corpus excerpt_corpus() {
  return textmix::make_corpus({excerpt_best(), excerpt_age()});
}

}  // namespace oracles
