#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "textmix/common.hpp"
#include "textmix/corpus.hpp"
#include "textmix/harness.hpp"
#include "textmix/mixing.hpp"
#include "textmix/mixing_model.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"
#include "textmix/scaling_fit.hpp"

namespace textmix {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(strfmt("cannot open '%s'", path.string().c_str()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(strfmt("failed reading '%s'", path.string().c_str()));
  return std::move(buffer).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strfmt("cannot create '%s'", path.string().c_str()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(strfmt("failed writing '%s'", path.string().c_str()));
}

namespace detail {

inline std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) {
      if (pos < content.size()) lines.emplace_back(content.substr(pos));
      break;
    }
    std::string line(content.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

inline std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return cells;
}

inline double parse_double(const std::string& cell, const char* what) {
  char* end = nullptr;
  double value = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') fail(strfmt("cannot parse %s '%s'", what, cell.c_str()));
  return value;
}

inline std::uint64_t parse_u64(const std::string& cell, const char* what) {
  char* end = nullptr;
  unsigned long long value = std::strtoull(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0' ||
      cell.find_first_not_of("0123456789") != std::string::npos) {
    fail(strfmt("cannot parse %s '%s'", what, cell.c_str()));
  }
  return value;
}

inline void check_tsv_safe(const std::string& value, const char* what) {
  if (value.find('\t') != std::string::npos || value.find('\n') != std::string::npos) {
    fail(strfmt("%s may not contain tabs or newlines: '%s'", what, value.c_str()));
  }
}

}  // namespace detail

struct ManifestEntry {
  std::string path;  // token or raw text file; resolved against the manifest dir on read
  std::string id;
  std::optional<std::string> title;
  std::optional<std::string> author;
  std::optional<std::string> language;
};

/// Reads a text catalog: TSV with header columns path and id, optionally
/// title, author, language. Relative paths are resolved against the
/// manifest's own directory.
inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path) {
  auto lines = detail::split_lines(read_file(manifest_path));
  if (lines.empty()) fail(strfmt("manifest '%s' is empty", manifest_path.string().c_str()));
  auto header = detail::split_tsv(lines[0]);
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column[header[c]] = c;
  if (!column.count("path") || !column.count("id")) {
    fail(strfmt("manifest '%s' must have 'path' and 'id' columns", manifest_path.string().c_str()));
  }
  auto base = manifest_path.parent_path();
  std::vector<ManifestEntry> entries;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    auto cells = detail::split_tsv(lines[row]);
    auto cell = [&](const char* name) -> std::optional<std::string> {
      auto it = column.find(name);
      if (it == column.end() || it->second >= cells.size() || cells[it->second].empty()) {
        return std::nullopt;
      }
      return cells[it->second];
    };
    ManifestEntry entry;
    auto path = cell("path");
    auto id = cell("id");
    if (!path || !id) {
      fail(strfmt("manifest '%s' row %zu misses path or id", manifest_path.string().c_str(), row));
    }
    std::filesystem::path p(*path);
    entry.path = p.is_absolute() ? p.string() : (base / p).string();
    entry.id = *id;
    entry.title = cell("title");
    entry.author = cell("author");
    entry.language = cell("language");
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) fail(strfmt("manifest '%s' lists no texts", manifest_path.string().c_str()));
  return entries;
}

/// Writes a catalog with paths exactly as given (callers pass paths relative
/// to the manifest location when the catalog should be relocatable).
inline void write_manifest(const std::filesystem::path& path,
                           std::span<const ManifestEntry> entries) {
  std::string out = "path\tid\ttitle\tauthor\tlanguage\n";
  for (const auto& e : entries) {
    detail::check_tsv_safe(e.path, "path");
    detail::check_tsv_safe(e.id, "id");
    out += e.path;
    out += '\t';
    out += e.id;
    for (const auto& field : {e.title, e.author, e.language}) {
      out += '\t';
      if (field) {
        detail::check_tsv_safe(*field, "manifest field");
        out += *field;
      }
    }
    out += '\n';
  }
  write_file(path, out);
}

/// One token per line.
inline std::vector<std::string> read_token_file(const std::filesystem::path& path) {
  auto lines = detail::split_lines(read_file(path));
  std::vector<std::string> tokens;
  tokens.reserve(lines.size());
  for (auto& line : lines) {
    if (!line.empty()) tokens.push_back(std::move(line));
  }
  if (tokens.empty()) fail(strfmt("token file '%s' is empty", path.string().c_str()));
  return tokens;
}

inline void write_token_file(const std::filesystem::path& path,
                             std::span<const std::string> tokens) {
  std::string out;
  std::size_t bytes = 0;
  for (const auto& t : tokens) bytes += t.size() + 1;
  out.reserve(bytes);
  for (const auto& t : tokens) {
    out += t;
    out += '\n';
  }
  write_file(path, out);
}

/// Loads the texts listed in a manifest of token files.
inline Corpus load_corpus(const std::filesystem::path& manifest_path, unsigned threads = 1) {
  auto entries = read_manifest(manifest_path);
  std::vector<Text> texts(entries.size());
  parallel_for(entries.size(), threads, [&](std::size_t i, std::size_t) {
    const auto& e = entries[i];
    texts[i] = make_text(e.id, read_token_file(e.path), e.title, e.author, e.language);
  });
  return make_corpus(std::move(texts));
}

inline void write_rankfreq_tsv(const std::filesystem::path& path,
                               const RankFrequencyDistribution& d) {
  bool with_tokens = !d.label.empty();
  std::string out = with_tokens ? "rank\tfrequency\tp\ttoken\n" : "rank\tfrequency\tp\n";
  for (std::size_t r = 0; r < d.size(); ++r) {
    out += strfmt("%zu\t%s\t%s", r + 1, fmt_double(d.frequency[r]).c_str(),
                  fmt_double(d.frequency[r] / d.total).c_str());
    if (with_tokens) {
      detail::check_tsv_safe(d.label[r], "token");
      out += '\t';
      out += d.label[r];
    }
    out += '\n';
  }
  write_file(path, out);
}

inline RankFrequencyDistribution read_rankfreq_tsv(const std::filesystem::path& path) {
  auto lines = detail::split_lines(read_file(path));
  if (lines.empty()) fail(strfmt("rank table '%s' is empty", path.string().c_str()));
  auto header = detail::split_tsv(lines[0]);
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column[header[c]] = c;
  if (!column.count("rank") || !column.count("frequency")) {
    fail(strfmt("rank table '%s' must have 'rank' and 'frequency' columns",
                path.string().c_str()));
  }
  bool with_tokens = column.count("token") > 0;
  std::vector<double> frequency;
  std::vector<std::string> label;
  std::size_t expected_rank = 1;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    auto cells = detail::split_tsv(lines[row]);
    if (cells.size() < header.size()) {
      fail(strfmt("rank table '%s' row %zu is short", path.string().c_str(), row));
    }
    auto rank = detail::parse_u64(cells[column["rank"]], "rank");
    if (rank != expected_rank) {
      fail(strfmt("rank table '%s' must list ranks 1..N in order (row %zu has %llu)",
                  path.string().c_str(), row, static_cast<unsigned long long>(rank)));
    }
    ++expected_rank;
    frequency.push_back(detail::parse_double(cells[column["frequency"]], "frequency"));
    if (with_tokens) label.push_back(cells[column["token"]]);
  }
  return make_distribution(std::move(frequency), std::move(label));
}

/// Profile tables carry their metadata in leading "# key<TAB>value" lines.
inline void write_profile_tsv(const std::filesystem::path& path, const AlphaProfile& profile,
                              const std::map<std::string, std::string>& extra = {}) {
  std::string out;
  out += strfmt("# method\t%s\n", profile.method.c_str());
  out += strfmt("# runs\t%zu\n", profile.runs);
  if (profile.regimes) {
    out += strfmt("# N_min\t%zu\n", profile.regimes->min_types);
    out += strfmt("# N_avg\t%s\n", fmt_double(profile.regimes->mean_types).c_str());
    out += strfmt("# N_max\t%zu\n", profile.regimes->max_types);
    if (profile.regimes->char_count) {
      out += strfmt("# N_char\t%d\n", *profile.regimes->char_count);
    }
  }
  for (const auto& [key, value] : extra) {
    detail::check_tsv_safe(value, "metadata value");
    out += strfmt("# %s\t%s\n", key.c_str(), value.c_str());
  }
  out += "n\talpha\tmean_N\n";
  for (std::size_t k = 0; k < profile.alpha.size(); ++k) {
    out += strfmt("%zu\t%s\t%s\n", k + 1, fmt_double(profile.alpha[k]).c_str(),
                  fmt_double(profile.mean_memoryless[k]).c_str());
  }
  write_file(path, out);
}

inline AlphaProfile read_profile_tsv(const std::filesystem::path& path) {
  auto lines = detail::split_lines(read_file(path));
  std::map<std::string, std::string> meta;
  std::size_t row = 0;
  while (row < lines.size() && lines[row].starts_with("# ")) {
    auto cells = detail::split_tsv(lines[row].substr(2));
    if (cells.size() == 2) meta[cells[0]] = cells[1];
    ++row;
  }
  if (row >= lines.size() || detail::split_tsv(lines[row]) !=
                                 std::vector<std::string>{"n", "alpha", "mean_N"}) {
    fail(strfmt("profile table '%s' must have header 'n\talpha\tmean_N'",
                path.string().c_str()));
  }
  AlphaProfile profile;
  std::size_t expected = 1;
  for (++row; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    auto cells = detail::split_tsv(lines[row]);
    if (cells.size() != 3) fail(strfmt("profile table '%s' row %zu is malformed",
                                       path.string().c_str(), row));
    if (detail::parse_u64(cells[0], "n") != expected) {
      fail(strfmt("profile table '%s' must list n = 1..N in order", path.string().c_str()));
    }
    ++expected;
    profile.alpha.push_back(detail::parse_double(cells[1], "alpha"));
    profile.mean_memoryless.push_back(detail::parse_double(cells[2], "mean_N"));
  }
  if (profile.alpha.empty()) fail(strfmt("profile table '%s' has no rows",
                                         path.string().c_str()));
  if (meta.count("method")) profile.method = meta["method"];
  if (meta.count("runs")) profile.runs = detail::parse_u64(meta["runs"], "runs");
  if (meta.count("N_min") && meta.count("N_avg") && meta.count("N_max")) {
    RegimeBoundaries regimes;
    regimes.min_types = detail::parse_u64(meta["N_min"], "N_min");
    regimes.mean_types = detail::parse_double(meta["N_avg"], "N_avg");
    regimes.max_types = detail::parse_u64(meta["N_max"], "N_max");
    if (meta.count("N_char")) {
      regimes.char_count = static_cast<int>(detail::parse_u64(meta["N_char"], "N_char"));
    }
    profile.regimes = regimes;
  }
  return profile;
}

/// Observed vs predicted probabilities with squared residuals at every rank.
inline void write_model_tsv(const std::filesystem::path& path, const NormalizedDistribution& p,
                            const MixingModel& model) {
  if (p.size() != model.p_hat.size()) fail("distribution and model sizes differ");
  std::string out = "rank\tp\tp_hat\tsq_error\n";
  for (std::size_t r = 0; r < p.size(); ++r) {
    double diff = p.p[r] - model.p_hat[r];
    out += strfmt("%zu\t%s\t%s\t%s\n", r + 1, fmt_double(p.p[r]).c_str(),
                  fmt_double(model.p_hat[r]).c_str(), fmt_double(diff * diff).c_str());
  }
  write_file(path, out);
}

inline void write_decile_tsv(const std::filesystem::path& path,
                             const DecileExperimentResult& result) {
  std::string out = "decile\tsample_id\tb\tgamma\ttheta\tN_avg\n";
  for (const auto& row : result.rows) {
    out += strfmt("%d\t%d\t%zu\t%s\t%s\t%s\n", row.decile, row.sample_id, row.break_rank,
                  fmt_double(row.gamma).c_str(), fmt_double(row.theta).c_str(),
                  fmt_double(row.mean_types).c_str());
  }
  write_file(path, out);
}

inline nlohmann::json fit_report_json(const BrokenPowerLawFit& fit) {
  return nlohmann::json{
      {"type", "fit_report"},
      {"theta", fit.theta},
      {"gamma", fit.gamma},
      {"b", fit.break_rank},
      {"x_b", fit.line.x_b},
      {"sse", fit.sse},
      {"window", {fit.options.window_lo, fit.options.window_hi}},
      {"n_candidates", fit.options.candidates},
      {"max_ranks", fit.options.max_ranks},
      {"sampled_ranks", fit.sampled_ranks},
  };
}

inline BrokenPowerLawFit fit_report_from_json(const nlohmann::json& j) {
  BrokenPowerLawFit fit;
  fit.theta = j.at("theta").get<double>();
  fit.gamma = j.at("gamma").get<double>();
  fit.break_rank = j.at("b").get<std::size_t>();
  fit.line.x_b = j.at("x_b").get<double>();
  fit.sse = j.at("sse").get<double>();
  fit.options.window_lo = j.at("window").at(0).get<double>();
  fit.options.window_hi = j.at("window").at(1).get<double>();
  fit.options.candidates = j.at("n_candidates").get<std::size_t>();
  fit.options.max_ranks = j.at("max_ranks").get<std::size_t>();
  fit.sampled_ranks = j.at("sampled_ranks").get<std::size_t>();
  fit.line.beta2 = -fit.theta;
  fit.line.beta4 = -fit.gamma;
  fit.line.sse = fit.sse;
  return fit;
}

inline nlohmann::json model_report_json(const MixingModel& model, std::optional<double> mu,
                                        std::size_t runs) {
  nlohmann::json j{
      {"type", "model_report"},
      {"theta", model.theta},
      {"sse", model.sse},
      {"C", model.normalizer},
      {"eval_ranks", model.eval_ranks.size()},
      {"runs", runs},
  };
  if (mu) j["mu"] = *mu;
  return j;
}

inline nlohmann::json refinement_report_json(std::span<const RefinementReport> reports) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json item{
        {"name", r.name}, {"pieces", r.pieces},       {"theta", r.theta},
        {"sse", r.sse},   {"C", r.normalizer},        {"runs", r.runs},
    };
    if (r.mu) item["mu"] = *r.mu;
    items.push_back(std::move(item));
  }
  return nlohmann::json{{"type", "refinement_report"}, {"refinements", std::move(items)}};
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(strfmt("cannot parse JSON '%s': %s", path.string().c_str(), e.what()));
  }
}

}  // namespace textmix
