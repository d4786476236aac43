#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "corex/synthetic.hpp"
#include "test_util.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(COREX_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

// Planted two-block corpus as text lines plus a labels file.
struct CorpusFiles {
  testutil::TempDir dir;
  std::string corpus, labels;

  explicit CorpusFiles(std::uint64_t seed) {
    const auto pc = corex::synthetic::two_block(500, 20, 0.3, 0.02, seed);
    std::ostringstream text, lab;
    for (std::size_t l = 0; l < pc.data.n_docs(); ++l) {
      bool first = true;
      for (auto w : pc.data.words_in(l)) {
        text << (first ? "" : " ") << "w" << w;
        first = false;
      }
      text << "\n";
      lab << (pc.doc_class[l] ? "beta" : "alpha") << "\n";
    }
    corpus = dir.file("corpus.txt");
    labels = dir.file("labels.txt");
    testutil::write_file(corpus, text.str());
    testutil::write_file(labels, lab.str());
  }
};

}  // namespace

TEST_CASE("cli fit is deterministic") {
  CorpusFiles f(3);
  const auto a = f.dir.file("a.json"), b = f.dir.file("b.json");
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --seed 7 --output " + a).status == 0);
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --seed 7 --output " + b).status == 0);
  CHECK(testutil::read_file(a) == testutil::read_file(b));
  const auto manifest = nlohmann::json::parse(testutil::read_file(a + ".manifest.json"));
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["inputs"].size() == 1);
  CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("cli usage errors") {
  CorpusFiles f(1);
  CHECK(run("fit --input " + f.corpus).status == 2);
  CHECK(run("fit --input " + f.corpus + " --topics 0").status == 2);
  CHECK(run("fit --input " + f.dir.file("nope.txt") + " --topics 2").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("bench --density 0.5,abc").status == 2);
  // runtime failure: unreadable model content
  testutil::write_file(f.dir.file("bad.json"), "{\"format_version\": 999}");
  CHECK(run("topics --model " + f.dir.file("bad.json")).status == 1);
}

TEST_CASE("cli fit prints restarts") {
  CorpusFiles f(2);
  const auto r = run("fit --input " + f.corpus + " --topics 2 --restarts 3 --output " + f.dir.file("m.json"));
  REQUIRE(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].rfind("restart 0 seed 0 objective", 0) == 0);
  CHECK(lines[3].rfind("selected restart", 0) == 0);
}

TEST_CASE("cli anchors are visible in the model file") {
  CorpusFiles f(4);
  const auto anchors = f.dir.file("anchors.json");
  testutil::write_file(anchors, R"([{"topic": 1, "words": ["w3", "w25"]}])");
  const auto model = f.dir.file("m.json");
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --anchors " + anchors + " --strength 2 --output " + model)
              .status == 0);
  const auto doc = nlohmann::json::parse(testutil::read_file(model));
  REQUIRE(doc["anchors"].size() == 2);
  const auto& vocab = doc["vocabulary"];
  for (const auto& a : doc["anchors"]) {
    CHECK(a["strength"] == 2.0);
    const auto term = vocab[a["word"].get<std::size_t>()].get<std::string>();
    CHECK((term == "w3" || term == "w25"));
    bool found = false;
    for (const auto& e : doc["alpha"])
      if (e[0] == a["word"] && e[1] == a["topic"]) found = e[2] == 2.0;
    CHECK(found);
  }

  testutil::write_file(anchors, R"([{"topic": 0, "words": ["zzz"]}])");
  CHECK(run("fit --input " + f.corpus + " --topics 2 --anchors " + anchors + " --output " + model).status == 1);
}

TEST_CASE("cli topics listing") {
  CorpusFiles f(5);
  const auto model = f.dir.file("m.json");
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --output " + model).status == 0);
  auto r = run("topics --model " + model);
  REQUIRE(r.status == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  const auto doc = nlohmann::json::parse(testutil::read_file(model));
  double prev = 1e300;
  for (std::size_t k = 0; k < 2; ++k) {
    std::istringstream in(lines[k]);
    std::size_t rank;
    double tc;
    in >> rank >> tc;
    CHECK(rank == k);
    CHECK(tc == doctest::Approx(doc["tc"][k].get<double>()).epsilon(1e-5));
    CHECK(tc <= prev);
    prev = tc;
  }
  r = run("topics --model " + model + " --top 3");
  for (const auto& l : lines_of(r.out)) {
    std::istringstream in(l);
    std::string tok;
    std::size_t n = 0;
    while (in >> tok) ++n;
    CHECK(n <= 5);
  }
}

TEST_CASE("cli transform reproduces training posteriors") {
  CorpusFiles f(6);
  const auto model = f.dir.file("m.json"), post = f.dir.file("post.csv"), tr = f.dir.file("tr.csv");
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --output " + model + " --posteriors " + post).status == 0);
  REQUIRE(run("transform --model " + model + " --input " + f.corpus + " --output " + tr).status == 0);
  const auto a = lines_of(testutil::read_file(post)), b = lines_of(testutil::read_file(tr));
  REQUIRE(a.size() == 501);
  REQUIRE(b.size() == 501);
  CHECK(a[0] == "doc,topic0,topic1");
  for (std::size_t k = 1; k < a.size(); ++k) {
    std::istringstream ia(a[k]), ib(b[k]);
    std::string ca, cb;
    while (std::getline(ia, ca, ',') && std::getline(ib, cb, ','))
      CHECK(std::abs(std::stod(ca) - std::stod(cb)) <= 1e-12);
  }
}

TEST_CASE("cli eval and select-anchors") {
  CorpusFiles f(3);
  const auto model = f.dir.file("m.json"), report = f.dir.file("r.json"), csv = f.dir.file("r.csv");
  REQUIRE(run("fit --input " + f.corpus + " --topics 2 --output " + model).status == 0);
  REQUIRE(run("eval --model " + model + " --input " + f.corpus + " --labels " + f.labels + " --output " + report +
              " --csv " + csv)
              .status == 0);
  const auto doc = nlohmann::json::parse(testutil::read_file(report));
  CHECK(doc["clustering"]["homogeneity"].get<double>() >= 0.95);
  CHECK(doc["topics"].size() == 2);
  CHECK(lines_of(testutil::read_file(csv)).size() == 3);

  auto r = run("select-anchors --input " + f.corpus + " --labels " + f.labels + " --top 5");
  REQUIRE(r.status == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "label,rank,word,mi");
  std::size_t alpha_rows = 0, beta_rows = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    alpha_rows += lines[k].rfind("alpha,", 0) == 0;
    beta_rows += lines[k].rfind("beta,", 0) == 0;
  }
  CHECK(alpha_rows == 5);
  CHECK(beta_rows == 5);

  // label count must match the corpus
  testutil::write_file(f.dir.file("short.txt"), "alpha\nbeta\n");
  CHECK(run("eval --model " + model + " --input " + f.corpus + " --labels " + f.dir.file("short.txt")).status != 0);
}

TEST_CASE("cli bench, hierarchy and topic-count") {
  CorpusFiles f(7);
  auto r = run("bench --docs 50 --vocab 40 --density 0.1,0.2 --topics 3 --repeats 2 --iters 2");
  REQUIRE(r.status == 0);
  CHECK(lines_of(r.out).size() == 1 + 2 * 2 * 2);

  const auto prefix = f.dir.file("h");
  r = run("hierarchy --input " + f.corpus + " --topics 4,2 --output-prefix " + prefix);
  REQUIRE(r.status == 0);
  CHECK(lines_of(testutil::read_file(prefix + ".edges.txt")).size() == 40 + 4);
  CHECK(!testutil::read_file(prefix + ".level2.json").empty());

  r = run("topic-count --input " + f.corpus + " --topics 1,2,3 --max-iter 60");
  REQUIRE(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "n_topics,total_tc,weakest_tc,flagged");
}
