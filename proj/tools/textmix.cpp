// Command line front end: every verb reads plain files, writes TSV/JSON, and
// is deterministic under --seed. Exit codes: 0 success, 1 usage, 2 data error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "textmix/common.hpp"
#include "textmix/corpus.hpp"
#include "textmix/extremal.hpp"
#include "textmix/generators.hpp"
#include "textmix/harness.hpp"
#include "textmix/io.hpp"
#include "textmix/mixing.hpp"
#include "textmix/mixing_model.hpp"
#include "textmix/parallel.hpp"
#include "textmix/rank_frequency.hpp"
#include "textmix/scaling_fit.hpp"
#include "textmix/tokenizer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0 = all hardware threads
  std::string out_dir = ".";
};

fs::path resolve_out(const GlobalOptions& g, const std::string& path) {
  fs::path p(path);
  return p.is_absolute() ? p : fs::path(g.out_dir) / p;
}

json run_metadata(const GlobalOptions& g, const std::string& command, json parameters) {
  return json{{"type", "run_metadata"},
              {"tool", "textmix"},
              {"version", textmix::kVersion},
              {"command", command},
              {"seed", g.seed},
              {"threads", textmix::resolve_threads(g.threads)},
              {"parameters", std::move(parameters)}};
}

int run_ingest(const GlobalOptions& g, const std::string& manifest, const std::string& out,
               bool strip, bool join_apostrophes) {
  auto entries = textmix::read_manifest(manifest);
  fs::path out_dir = resolve_out(g, out);
  fs::create_directories(out_dir);
  textmix::TokenizerConfig config;
  config.join_apostrophes = join_apostrophes;

  struct Row {
    std::string token_file;
    std::size_t tokens = 0;
    std::size_t types = 0;
    textmix::StripStatus status = textmix::StripStatus::unstripped;
    std::string warning;
  };
  std::vector<Row> rows(entries.size());
  textmix::parallel_for(entries.size(), g.threads, [&](std::size_t i, std::size_t) {
    const auto& entry = entries[i];
    std::string raw = textmix::read_file(entry.path);
    Row row;
    if (strip) {
      auto stripped = textmix::strip_boilerplate(raw);
      row.status = stripped.status;
      if (!stripped.warning.empty()) {
        row.warning = entry.id + ": " + stripped.warning;
      }
      raw = std::move(stripped.text);
    }
    auto tokens = textmix::tokenize(raw, config, entry.path);
    if (tokens.empty()) textmix::fail(textmix::strfmt("'%s' has no word tokens", entry.path.c_str()));
    row.token_file = entry.id + ".tokens";
    row.tokens = tokens.size();
    std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
    row.types = types.size();
    textmix::write_token_file(out_dir / row.token_file, tokens);
    rows[i] = std::move(row);
  });

  std::vector<textmix::ManifestEntry> out_entries;
  json texts = json::array();
  json warnings = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto entry = entries[i];
    entry.path = rows[i].token_file;
    out_entries.push_back(std::move(entry));
    texts.push_back(json{{"id", entries[i].id},
                         {"path", rows[i].token_file},
                         {"tokens", rows[i].tokens},
                         {"types", rows[i].types},
                         {"strip", textmix::strip_status_name(rows[i].status)}});
    if (!rows[i].warning.empty()) warnings.push_back(rows[i].warning);
  }
  textmix::write_manifest(out_dir / "manifest.tsv", out_entries);
  textmix::write_json(out_dir / "ingest_report.json",
                      json{{"type", "ingest_report"}, {"texts", texts}, {"warnings", warnings}});
  textmix::write_json(out_dir / "ingest.meta.json",
                      run_metadata(g, "ingest",
                                   json{{"manifest", manifest},
                                        {"strip", strip},
                                        {"join_apostrophes", join_apostrophes},
                                        {"texts", entries.size()}}));
  std::cout << "ingested " << entries.size() << " texts -> " << out_dir.string() << "\n";
  return 0;
}

int run_rankfreq(const GlobalOptions& g, const std::string& tokens_path, const std::string& out) {
  auto tokens = textmix::read_token_file(tokens_path);
  auto d = textmix::rank_frequency(tokens);
  textmix::write_rankfreq_tsv(resolve_out(g, out), d);
  std::cout << "ranked " << d.size() << " types over " << static_cast<std::uint64_t>(d.total)
            << " tokens\n";
  return 0;
}

int run_idealize(const GlobalOptions& g, const std::string& tokens_path, const std::string& out) {
  auto tokens = textmix::read_token_file(tokens_path);
  auto ideal = textmix::idealize(textmix::rank_frequency(tokens));
  textmix::write_rankfreq_tsv(resolve_out(g, out), ideal);
  std::cout << "idealized " << ideal.size() << " types (surrogate volume "
            << static_cast<std::uint64_t>(ideal.total) << ")\n";
  return 0;
}

int run_fit(const GlobalOptions& g, const std::string& rankfreq_path,
            const std::optional<std::string>& out, std::size_t candidates,
            const std::vector<double>& window, std::size_t max_ranks) {
  auto d = textmix::read_rankfreq_tsv(rankfreq_path);
  textmix::ScanOptions options;
  options.candidates = candidates;
  options.window_lo = window.at(0);
  options.window_hi = window.at(1);
  options.max_ranks = max_ranks;
  options.threads = textmix::resolve_threads(g.threads);
  auto fit = textmix::scan_break(d, options);
  json report = textmix::fit_report_json(fit);
  if (out) {
    textmix::write_json(resolve_out(g, *out), report);
    textmix::write_json(resolve_out(g, *out + ".meta.json"),
                        run_metadata(g, "fit", json{{"rankfreq", rankfreq_path}}));
    std::cout << "b=" << fit.break_rank << " theta=" << fit.theta << " gamma=" << fit.gamma
              << "\n";
  } else {
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}

int run_mix(const GlobalOptions& g, const std::string& manifest, std::size_t runs,
            const std::string& out) {
  auto corpus = textmix::load_corpus(manifest, g.threads);
  auto profile = textmix::run_mixing(corpus, runs, g.seed, textmix::resolve_threads(g.threads));
  fs::path out_path = resolve_out(g, out);
  textmix::write_profile_tsv(out_path, profile,
                             {{"seed", textmix::strfmt("%llu",
                                                       static_cast<unsigned long long>(g.seed))}});
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "mix",
                                   json{{"manifest", manifest},
                                        {"runs", profile.runs},
                                        {"texts", corpus.size()}}));
  std::cout << "mixed " << corpus.size() << " texts, " << profile.runs << " runs, "
            << profile.alpha.size() << " types\n";
  return 0;
}

int run_model(const GlobalOptions& g, const std::string& profile_path,
              const std::string& rankfreq_path, const std::string& out,
              const std::optional<std::string>& report_path) {
  auto profile = textmix::read_profile_tsv(profile_path);
  auto d = textmix::read_rankfreq_tsv(rankfreq_path);
  auto p = textmix::normalize(d);
  auto model = textmix::select_theta(profile, p, {}, 10000, textmix::resolve_threads(g.threads));
  std::optional<double> mu;
  if (profile.regimes) {
    try {
      mu = textmix::fit_mu(profile.alpha, profile.regimes->mean_types,
                           static_cast<double>(profile.alpha.size()))
               .mu;
    } catch (const textmix::Error&) {
    }
  }
  fs::path out_path = resolve_out(g, out);
  textmix::write_model_tsv(out_path, p, model);
  json report = textmix::model_report_json(model, mu, profile.runs);
  if (report_path) textmix::write_json(resolve_out(g, *report_path), report);
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "model",
                                   json{{"profile", profile_path},
                                        {"rankfreq", rankfreq_path}}));
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_extremal(const GlobalOptions& g, const std::string& rankfreq_path,
                 const std::string& method, std::size_t runs, std::size_t max_terms,
                 const std::string& out) {
  auto d = textmix::read_rankfreq_tsv(rankfreq_path);
  textmix::ExtremalProfile result;
  std::map<std::string, std::string> extra;
  if (method == "analytic") {
    result = textmix::extremal_alpha_analytic(d, max_terms);
  } else if (method == "mc") {
    result = textmix::extremal_alpha_mc(d, runs, g.seed, textmix::resolve_threads(g.threads));
    extra["seed"] = textmix::strfmt("%llu", static_cast<unsigned long long>(g.seed));
  } else {
    textmix::fail(textmix::strfmt("unknown method '%s' (use analytic or mc)", method.c_str()));
  }
  fs::path out_path = resolve_out(g, out);
  textmix::write_profile_tsv(out_path, result.profile, extra);
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "extremal",
                                   json{{"rankfreq", rankfreq_path},
                                        {"method", method},
                                        {"runs", result.profile.runs},
                                        {"max_terms", max_terms}}));
  std::cout << "extremal profile (" << method << ") over " << result.profile.alpha.size()
            << " types\n";
  return 0;
}

int run_simulate(const GlobalOptions& g, double alpha0, double mu, std::uint64_t tokens,
                 const std::string& out) {
  textmix::GeneratorConfig config{alpha0, mu, tokens, g.seed};
  auto stream = textmix::generate(config);
  std::unordered_set<std::string_view> types(stream.begin(), stream.end());
  fs::path out_path = resolve_out(g, out);
  textmix::write_token_file(out_path, stream);
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "simulate",
                                   json{{"alpha0", alpha0},
                                        {"mu", mu},
                                        {"tokens", tokens},
                                        {"types", types.size()}}));
  std::cout << "simulated " << stream.size() << " tokens, " << types.size() << " types\n";
  return 0;
}

textmix::VocabularySharing parse_sharing(const json& spec, std::uint64_t default_seed) {
  textmix::VocabularySharing sharing;
  sharing.seed = default_seed;
  if (!spec.contains("sharing")) return sharing;
  const json& s = spec.at("sharing");
  std::string policy = s.value("policy", "full_overlap");
  using Policy = textmix::VocabularySharing::Policy;
  if (policy == "full_overlap") {
    sharing.policy = Policy::full_overlap;
  } else if (policy == "disjoint") {
    sharing.policy = Policy::disjoint;
  } else if (policy == "random_overlap") {
    sharing.policy = Policy::random_overlap;
    sharing.q = s.at("q").get<double>();
  } else if (policy == "shared_core") {
    sharing.policy = Policy::shared_core;
    sharing.core_size = s.at("core_size").get<std::uint64_t>();
  } else {
    textmix::fail(textmix::strfmt("unknown sharing policy '%s'", policy.c_str()));
  }
  if (s.contains("seed")) sharing.seed = s.at("seed").get<std::uint64_t>();
  return sharing;
}

int run_simulate_corpus(const GlobalOptions& g, const std::string& spec_path,
                        const std::string& out) {
  json spec = textmix::read_json(spec_path);
  if (!spec.contains("texts") || !spec.at("texts").is_array() || spec.at("texts").empty()) {
    textmix::fail("corpus spec needs a non-empty 'texts' array");
  }
  std::vector<textmix::GeneratorConfig> configs;
  for (const json& item : spec.at("texts")) {
    textmix::GeneratorConfig config;
    config.alpha0 = item.at("alpha0").get<double>();
    config.mu = item.value("mu", 0.0);
    config.tokens = item.at("tokens").get<std::uint64_t>();
    std::size_t count = item.value("count", std::size_t{1});
    for (std::size_t c = 0; c < count; ++c) {
      textmix::GeneratorConfig each = config;
      each.seed = item.contains("seed") ? textmix::derive_seed(item.at("seed").get<std::uint64_t>(), c)
                                        : textmix::derive_seed(g.seed, configs.size());
      configs.push_back(each);
    }
  }
  auto corpus = textmix::synthesize_corpus(configs, parse_sharing(spec, g.seed));
  fs::path out_dir = resolve_out(g, out);
  fs::create_directories(out_dir);
  std::vector<textmix::ManifestEntry> entries;
  for (const auto& text : corpus.texts) {
    textmix::write_token_file(out_dir / (text.id + ".tokens"), text.tokens);
    entries.push_back(textmix::ManifestEntry{text.id + ".tokens", text.id, {}, {}, {}});
  }
  textmix::write_manifest(out_dir / "manifest.tsv", entries);
  textmix::write_json(out_dir / "simulate_corpus.meta.json",
                      run_metadata(g, "simulate-corpus",
                                   json{{"spec", spec_path}, {"texts", corpus.size()}}));
  std::cout << "simulated " << corpus.size() << " texts -> " << out_dir.string() << "\n";
  return 0;
}

int run_deciles(const GlobalOptions& g, const std::string& manifest, std::size_t books,
                std::size_t samples, bool desk_scale, const std::string& out) {
  auto corpus = textmix::load_corpus(manifest, g.threads);
  textmix::DecileConfig config;
  if (desk_scale) {
    config = textmix::desk_scale_config(g.seed);
  } else {
    config.books_per_sample = books;
    config.n_samples = samples;
    config.seed = g.seed;
  }
  config.threads = textmix::resolve_threads(g.threads);
  auto result = textmix::run_decile_experiment(corpus, config);
  fs::path out_path = resolve_out(g, out);
  textmix::write_decile_tsv(out_path, result);
  json warnings = json::array();
  for (const auto& w : result.warnings) warnings.push_back(w);
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "deciles",
                                   json{{"manifest", manifest},
                                        {"books_per_sample", config.books_per_sample},
                                        {"n_samples", config.n_samples},
                                        {"desk_scale", desk_scale},
                                        {"rows", result.rows.size()},
                                        {"skipped_deciles", result.skipped_deciles},
                                        {"warnings", warnings}}));
  std::cout << "decile survey: " << result.rows.size() << " rows, "
            << result.skipped_deciles.size() << " deciles skipped\n";
  return 0;
}

std::vector<textmix::RefinementSpec> parse_refinements(const std::vector<std::string>& raw) {
  std::vector<textmix::RefinementSpec> specs;
  for (const auto& item : raw) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      textmix::fail(textmix::strfmt("refinement must look like name=off1,off2,... got '%s'",
                                    item.c_str()));
    }
    textmix::RefinementSpec spec;
    spec.name = item.substr(0, eq);
    std::size_t pos = eq + 1;
    while (pos < item.size()) {
      std::size_t comma = item.find(',', pos);
      std::string cell = item.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      if (!cell.empty()) {
        spec.split_offsets.push_back(textmix::detail::parse_u64(cell, "split offset"));
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

int run_refine(const GlobalOptions& g, const std::string& tokens_path, const std::string& id,
               const std::vector<std::string>& refinements, bool include_extremal,
               std::size_t runs, const std::string& out) {
  auto parent = textmix::make_text(id, textmix::read_token_file(tokens_path));
  auto specs = parse_refinements(refinements);
  auto reports = textmix::run_refinement_study(parent, specs, runs, g.seed, include_extremal,
                                               textmix::resolve_threads(g.threads));
  fs::path out_path = resolve_out(g, out);
  textmix::write_json(out_path, textmix::refinement_report_json(reports));
  textmix::write_json(out_path.string() + ".meta.json",
                      run_metadata(g, "refine",
                                   json{{"tokens", tokens_path},
                                        {"refinements", refinements},
                                        {"extremal", include_extremal},
                                        {"runs", runs}}));
  std::cout << "refinement study: " << reports.size() << " entries -> " << out_path.string()
            << "\n";
  return 0;
}

int run_report(const std::string& in) {
  json doc = textmix::read_json(in);
  static const std::unordered_set<std::string> kKnown = {
      "fit_report", "model_report", "refinement_report", "ingest_report", "run_metadata"};
  if (!doc.contains("type") || !doc.at("type").is_string() ||
      !kKnown.count(doc.at("type").get<std::string>())) {
    textmix::fail(textmix::strfmt("'%s' is not a recognized report document", in.c_str()));
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions g;
  CLI::App app{"corpus statistics, text mixing, and rank-frequency models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--out-dir", g.out_dir, "directory for relative output paths");

  // ingest
  std::string in_manifest, in_out;
  bool in_strip = false, in_join = false;
  auto* ingest = app.add_subcommand("ingest", "tokenize raw texts listed in a manifest");
  ingest->add_option("--manifest", in_manifest, "raw-text manifest TSV")->required();
  ingest->add_option("--out", in_out, "output directory")->required();
  ingest->add_flag("--strip-boilerplate", in_strip, "remove header/footer blocks");
  ingest->add_flag("--join-apostrophes", in_join, "keep word-internal apostrophes");

  // rankfreq
  std::string rf_tokens, rf_out;
  auto* rankfreq = app.add_subcommand("rankfreq", "rank-frequency table of a token file");
  rankfreq->add_option("--tokens", rf_tokens, "token file")->required();
  rankfreq->add_option("--out", rf_out, "output TSV")->required();

  // idealize
  std::string id_tokens, id_out;
  auto* idealize = app.add_subcommand("idealize", "pure power-law surrogate of a token file");
  idealize->add_option("--tokens", id_tokens, "token file")->required();
  idealize->add_option("--out", id_out, "output TSV")->required();

  // fit
  std::string fit_rankfreq;
  std::optional<std::string> fit_out;
  std::size_t fit_candidates = 1000;
  std::vector<double> fit_window = {0.2, 0.8};
  std::size_t fit_max_ranks = 10000;
  auto* fit = app.add_subcommand("fit", "broken power-law fit of a rank table");
  fit->add_option("--rankfreq", fit_rankfreq, "rank table TSV")->required();
  fit->add_option("--out", fit_out, "report JSON (default: stdout)");
  fit->add_option("--candidates", fit_candidates, "break positions tried");
  fit->add_option("--window", fit_window, "break window as fractions of log10 N")
      ->expected(2);
  fit->add_option("--max-ranks", fit_max_ranks, "rank subsample cap");

  // mix
  std::string mix_manifest, mix_out;
  std::size_t mix_runs = 0;
  auto* mix = app.add_subcommand("mix", "introduction-rate profile of a corpus");
  mix->add_option("--manifest", mix_manifest, "token-file manifest TSV")->required();
  mix->add_option("--runs", mix_runs, "reading orders (0 = 10 per text, floor 100)");
  mix->add_option("--out", mix_out, "profile TSV")->required();

  // model
  std::string model_profile, model_rankfreq, model_out;
  std::optional<std::string> model_report;
  auto* model = app.add_subcommand("model", "predict a rank distribution from a profile");
  model->add_option("--profile", model_profile, "profile TSV")->required();
  model->add_option("--rankfreq", model_rankfreq, "observed rank table TSV")->required();
  model->add_option("--out", model_out, "model TSV")->required();
  model->add_option("--report", model_report, "also write the report JSON here");

  // extremal
  std::string ex_rankfreq, ex_method = "analytic", ex_out;
  std::size_t ex_runs = 1000, ex_max_terms = 1000;
  auto* extremal = app.add_subcommand("extremal", "finest-refinement profile of a rank table");
  extremal->add_option("--rankfreq", ex_rankfreq, "rank table TSV")->required();
  extremal->add_option("--method", ex_method, "analytic or mc");
  extremal->add_option("--runs", ex_runs, "Monte Carlo shuffles (mc only)");
  extremal->add_option("--max-terms", ex_max_terms, "gap distribution truncation");
  extremal->add_option("--out", ex_out, "profile TSV")->required();

  // simulate
  double sim_alpha0 = 0.1, sim_mu = 0.0;
  std::uint64_t sim_tokens = 0;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "rich-get-richer token stream");
  simulate->add_option("--alpha0", sim_alpha0, "base introduction probability")->required();
  simulate->add_option("--mu", sim_mu, "introduction decay exponent");
  simulate->add_option("--tokens", sim_tokens, "stream length")->required();
  simulate->add_option("--out", sim_out, "token file")->required();

  // simulate-corpus
  std::string sc_spec, sc_out;
  auto* simulate_corpus =
      app.add_subcommand("simulate-corpus", "generate a corpus from a JSON spec");
  simulate_corpus->add_option("--spec", sc_spec, "corpus spec JSON")->required();
  simulate_corpus->add_option("--out", sc_out, "output directory")->required();

  // deciles
  std::string dec_manifest, dec_out;
  std::size_t dec_books = 50, dec_samples = 1000;
  bool dec_desk = false;
  auto* deciles = app.add_subcommand("deciles", "break vs vocabulary survey by decile");
  deciles->add_option("--manifest", dec_manifest, "token-file manifest TSV")->required();
  deciles->add_option("--books-per-sample", dec_books, "texts pooled per sample");
  deciles->add_option("--samples", dec_samples, "samples per decile");
  deciles->add_flag("--desk-scale", dec_desk, "reduced protocol (20 books x 20 samples)");
  deciles->add_option("--out", dec_out, "survey TSV")->required();

  // refine
  std::string ref_tokens, ref_id = "text", ref_out;
  std::vector<std::string> ref_specs;
  std::size_t ref_runs = 0;
  bool ref_no_extremal = false;
  auto* refine = app.add_subcommand("refine", "model quality across refinements of one text");
  refine->add_option("--tokens", ref_tokens, "token file")->required();
  refine->add_option("--id", ref_id, "text id used for piece names");
  refine->add_option("--refinement", ref_specs,
                     "name=off1,off2,... (repeatable; empty offsets = whole text)");
  refine->add_flag("--no-extremal", ref_no_extremal, "skip the extremal profile entry");
  refine->add_option("--runs", ref_runs, "mixing runs per refinement (0 = default)");
  refine->add_option("--out", ref_out, "report JSON")->required();

  // report
  std::string rep_in;
  auto* report = app.add_subcommand("report", "validate and pretty-print a report document");
  report->add_option("--in", rep_in, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(ingest)) return run_ingest(g, in_manifest, in_out, in_strip, in_join);
    if (app.got_subcommand(rankfreq)) return run_rankfreq(g, rf_tokens, rf_out);
    if (app.got_subcommand(idealize)) return run_idealize(g, id_tokens, id_out);
    if (app.got_subcommand(fit)) {
      return run_fit(g, fit_rankfreq, fit_out, fit_candidates, fit_window, fit_max_ranks);
    }
    if (app.got_subcommand(mix)) return run_mix(g, mix_manifest, mix_runs, mix_out);
    if (app.got_subcommand(model)) {
      return run_model(g, model_profile, model_rankfreq, model_out, model_report);
    }
    if (app.got_subcommand(extremal)) {
      return run_extremal(g, ex_rankfreq, ex_method, ex_runs, ex_max_terms, ex_out);
    }
    if (app.got_subcommand(simulate)) return run_simulate(g, sim_alpha0, sim_mu, sim_tokens, sim_out);
    if (app.got_subcommand(simulate_corpus)) return run_simulate_corpus(g, sc_spec, sc_out);
    if (app.got_subcommand(deciles)) {
      return run_deciles(g, dec_manifest, dec_books, dec_samples, dec_desk, dec_out);
    }
    if (app.got_subcommand(refine)) {
      return run_refine(g, ref_tokens, ref_id, ref_specs, !ref_no_extremal, ref_runs, ref_out);
    }
    if (app.got_subcommand(report)) return run_report(rep_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
