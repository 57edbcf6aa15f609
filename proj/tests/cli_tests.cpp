#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "oracles.hpp"
#include "textmix/io.hpp"

using namespace textmix;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

struct Workspace {
  oracles::TempDir dir;

  Workspace() {
    write_file(dir.file("raw1.txt"),
               "Preface junk\n*** START OF THE EBOOK ***\n"
               "It was the best of times, it was the worst of times.\n"
               "*** END OF THE EBOOK ***\nLicense junk\n");
    write_file(dir.file("raw2.txt"),
               "*** START OF THE EBOOK ***\n"
               "It was the age of wisdom, it was the age of foolishness.\n"
               "*** END OF THE EBOOK ***\n");
    write_file(dir.file("raw_manifest.tsv"),
               "path\tid\tlanguage\nraw1.txt\tbest\ten\nraw2.txt\tage\ten\n");
  }

  std::string path(const std::string& name) const { return dir.file(name).string(); }
};

}  // namespace

TEST_CASE("cli reports usage errors as exit code 1") {
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("ingest") == 1);                 // missing required flags
  CHECK(run_cli("fit --rankfreq x --bogus") == 1);
}

TEST_CASE("cli reports data errors as exit code 2") {
  Workspace ws;
  CHECK(run_cli("rankfreq --tokens " + ws.path("nope.tokens") + " --out " +
                ws.path("out.tsv")) == 2);
  write_file(ws.dir.file("empty.tokens"), "");
  CHECK(run_cli("rankfreq --tokens " + ws.path("empty.tokens") + " --out " +
                ws.path("out.tsv")) == 2);
}

TEST_CASE("ingest tokenizes a manifest of raw texts") {
  Workspace ws;
  REQUIRE(run_cli("ingest --manifest " + ws.path("raw_manifest.tsv") + " --out " +
                  ws.path("corpus") + " --strip-boilerplate") == 0);
  auto tokens = read_token_file(ws.dir.file("corpus/best.tokens"));
  CHECK(tokens == std::vector<std::string>{"it", "was", "the", "best", "of", "times", "it", "was",
                                           "the", "worst", "of", "times"});
  auto corpus = load_corpus(ws.dir.file("corpus/manifest.tsv"));
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.texts[0].language == "en");

  auto report = read_json(ws.dir.file("corpus/ingest_report.json"));
  CHECK(report["type"] == "ingest_report");
  REQUIRE(report["texts"].is_array());
  CHECK(report["texts"].size() == 2);
  CHECK(report["texts"][0]["strip"] == "stripped");
  auto meta = read_json(ws.dir.file("corpus/ingest.meta.json"));
  CHECK(meta["type"] == "run_metadata");
  CHECK(meta["tool"] == "textmix");
}

TEST_CASE("the full pipeline runs end to end") {
  Workspace ws;
  REQUIRE(run_cli("ingest --manifest " + ws.path("raw_manifest.tsv") + " --out " +
                  ws.path("corpus") + " --strip-boilerplate") == 0);

  // Pool both texts into one stream for ranking.
  auto best = read_token_file(ws.dir.file("corpus/best.tokens"));
  auto age = read_token_file(ws.dir.file("corpus/age.tokens"));
  auto pooled = best;
  pooled.insert(pooled.end(), age.begin(), age.end());
  write_token_file(ws.dir.file("pooled.tokens"), pooled);

  REQUIRE(run_cli("rankfreq --tokens " + ws.path("pooled.tokens") + " --out " +
                  ws.path("rf.tsv")) == 0);
  auto d = read_rankfreq_tsv(ws.dir.file("rf.tsv"));
  CHECK(d.frequency == std::vector<double>{4, 4, 4, 4, 2, 2, 1, 1, 1, 1});

  REQUIRE(run_cli("idealize --tokens " + ws.path("pooled.tokens") + " --out " +
                  ws.path("ideal.tsv")) == 0);
  auto ideal = read_rankfreq_tsv(ws.dir.file("ideal.tsv"));
  CHECK(ideal.size() == 10);
  CHECK(ideal.frequency.back() == 1.0);

  REQUIRE(run_cli("mix --manifest " + ws.path("corpus/manifest.tsv") + " --runs 60 --seed 5 --out " +
                  ws.path("profile.tsv")) == 0);
  auto profile = read_profile_tsv(ws.dir.file("profile.tsv"));
  CHECK(profile.alpha.size() == 10);
  CHECK(profile.runs == 60);
  CHECK(profile.alpha[0] == 1.0);
  REQUIRE(profile.regimes.has_value());
  CHECK(profile.regimes->min_types == 7);
  CHECK(profile.regimes->max_types == 7);
  CHECK(profile.regimes->char_count == 46);

  REQUIRE(run_cli("model --profile " + ws.path("profile.tsv") + " --rankfreq " + ws.path("rf.tsv") +
                  " --out " + ws.path("model.tsv") + " --report " + ws.path("model.json")) == 0);
  auto report = read_json(ws.dir.file("model.json"));
  CHECK(report["type"] == "model_report");
  double theta = report["theta"].get<double>();
  CHECK(theta >= 0.75);
  CHECK(theta <= 1.25);
  auto model_lines = detail::split_lines(read_file(ws.dir.file("model.tsv")));
  CHECK(model_lines[0] == "rank\tp\tp_hat\tsq_error");
  CHECK(model_lines.size() == 11);

  REQUIRE(run_cli("extremal --rankfreq " + ws.path("rf.tsv") + " --method analytic --out " +
                  ws.path("extremal.tsv")) == 0);
  auto analytic = read_profile_tsv(ws.dir.file("extremal.tsv"));
  CHECK(analytic.method == "analytic");
  CHECK(analytic.alpha.size() == 10);

  REQUIRE(run_cli("extremal --rankfreq " + ws.path("rf.tsv") +
                  " --method mc --runs 200 --seed 3 --out " + ws.path("extremal_mc.tsv")) == 0);
  auto mc = read_profile_tsv(ws.dir.file("extremal_mc.tsv"));
  CHECK(mc.method == "mc");
  CHECK(mc.runs == 200);
}

TEST_CASE("fit reports go to a file or stdout") {
  Workspace ws;
  auto d = idealize(300, 3000.0);
  write_rankfreq_tsv(ws.dir.file("ideal.tsv"), d);
  REQUIRE(run_cli("fit --rankfreq " + ws.path("ideal.tsv") + " --out " + ws.path("fit.json")) == 0);
  auto report = read_json(ws.dir.file("fit.json"));
  CHECK(report["type"] == "fit_report");
  CHECK(report["theta"].get<double>() > 0.5);
  CHECK(report.contains("b"));
  CHECK(report.contains("gamma"));
  CHECK(report.contains("window"));

  std::string cmd = std::string(CLI_BIN) + " fit --rankfreq " + ws.path("ideal.tsv") + " > " +
                    ws.path("fit_stdout.json") + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto from_stdout = read_json(ws.dir.file("fit_stdout.json"));
  CHECK(from_stdout["type"] == "fit_report");
}

TEST_CASE("mix output is bit-identical under a fixed seed") {
  Workspace ws;
  REQUIRE(run_cli("ingest --manifest " + ws.path("raw_manifest.tsv") + " --out " +
                  ws.path("corpus") + " --strip-boilerplate") == 0);
  REQUIRE(run_cli("mix --manifest " + ws.path("corpus/manifest.tsv") +
                  " --runs 40 --seed 11 --threads 2 --out " + ws.path("p1.tsv")) == 0);
  REQUIRE(run_cli("mix --manifest " + ws.path("corpus/manifest.tsv") +
                  " --runs 40 --seed 11 --threads 1 --out " + ws.path("p2.tsv")) == 0);
  REQUIRE(run_cli("mix --manifest " + ws.path("corpus/manifest.tsv") +
                  " --runs 40 --seed 12 --out " + ws.path("p3.tsv")) == 0);
  CHECK(read_file(ws.dir.file("p1.tsv")) == read_file(ws.dir.file("p2.tsv")));
  CHECK(read_file(ws.dir.file("p1.tsv")) != read_file(ws.dir.file("p3.tsv")));
}

TEST_CASE("simulate and simulate-corpus generate reusable inputs") {
  Workspace ws;
  REQUIRE(run_cli("simulate --alpha0 0.2 --tokens 500 --seed 1 --out " +
                  ws.path("stream.tokens")) == 0);
  auto stream = read_token_file(ws.dir.file("stream.tokens"));
  REQUIRE(stream.size() == 500);
  CHECK(stream[0] == "w000001");

  write_file(ws.dir.file("spec.json"),
             "{\n"
             "  \"sharing\": {\"policy\": \"shared_core\", \"core_size\": 40},\n"
             "  \"texts\": [{\"alpha0\": 0.3, \"tokens\": 400, \"seed\": 9, \"count\": 12}]\n"
             "}\n");
  REQUIRE(run_cli("simulate-corpus --spec " + ws.path("spec.json") + " --out " +
                  ws.path("sim")) == 0);
  auto corpus = load_corpus(ws.dir.file("sim/manifest.tsv"));
  REQUIRE(corpus.size() == 12);
  CHECK(corpus.texts[0].id == "text001");
  CHECK(corpus.texts[0].token_count() == 400);

  REQUIRE(run_cli("deciles --manifest " + ws.path("sim/manifest.tsv") +
                  " --books-per-sample 1 --samples 2 --seed 4 --out " + ws.path("survey.tsv")) == 0);
  auto lines = detail::split_lines(read_file(ws.dir.file("survey.tsv")));
  CHECK(lines[0] == "decile\tsample_id\tb\tgamma\ttheta\tN_avg");
  CHECK(lines.size() >= 2);
}

TEST_CASE("refine summarizes cuts of one stream") {
  Workspace ws;
  REQUIRE(run_cli("simulate --alpha0 0.3 --tokens 1200 --seed 8 --out " +
                  ws.path("parent.tokens")) == 0);
  REQUIRE(run_cli("refine --tokens " + ws.path("parent.tokens") +
                  " --id parent --refinement halves=600 --refinement thirds=400,800"
                  " --runs 30 --seed 2 --out " + ws.path("refine.json")) == 0);
  auto report = read_json(ws.dir.file("refine.json"));
  CHECK(report["type"] == "refinement_report");
  REQUIRE(report["refinements"].size() == 3);
  CHECK(report["refinements"][0]["name"] == "halves");
  CHECK(report["refinements"][1]["name"] == "thirds");
  CHECK(report["refinements"][2]["name"] == "extremal");

  REQUIRE(run_cli("refine --tokens " + ws.path("parent.tokens") +
                  " --id parent --refinement halves=600 --no-extremal"
                  " --runs 30 --seed 2 --out " + ws.path("refine2.json")) == 0);
  auto no_extremal = read_json(ws.dir.file("refine2.json"));
  CHECK(no_extremal["refinements"].size() == 1);
}

TEST_CASE("report validates known document types") {
  Workspace ws;
  auto d = idealize(300, 3000.0);
  write_rankfreq_tsv(ws.dir.file("ideal.tsv"), d);
  REQUIRE(run_cli("fit --rankfreq " + ws.path("ideal.tsv") + " --out " + ws.path("fit.json")) == 0);
  CHECK(run_cli("report --in " + ws.path("fit.json")) == 0);
  write_file(ws.dir.file("alien.json"), "{\"type\": \"mystery\"}\n");
  CHECK(run_cli("report --in " + ws.path("alien.json")) == 2);
  write_file(ws.dir.file("broken.json"), "not json");
  CHECK(run_cli("report --in " + ws.path("broken.json")) == 2);
}
