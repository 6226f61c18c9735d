#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "stub_server.hpp"
#include "support/test_paths.hpp"

using namespace vf;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome vf_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(vf_cli({}).code == 1);
  CHECK(vf_cli({"frobnicate"}).code == 1);
  CHECK(vf_cli({"analyze", "--corpus", "x.jsonl", "--out", "o", "--colour", "blue"}).code == 1);
  const auto bad = vf_cli({"extract", "--corpus", testing::fixture("analysis12.jsonl").string(),
                           "--method", "textrank", "--out", "/tmp/none.jsonl"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "textrank"));
  CHECK(contains(bad.err, "--method"));
  CHECK(vf_cli({"--help"}).code == 0);
}

TEST_CASE("ingest") {
  const auto ok = vf_cli({"ingest", "--in", testing::fixture("analysis12.jsonl").string(), "--validate"});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "12"));
  CHECK(contains(ok.out, "[ingest] fingerprint: "));

  testing::TempDir dir;
  testing::write_file(dir.path() / "broken.jsonl", "{\"claim\": \"x\"}\n");
  const auto broken = vf_cli({"ingest", "--in", (dir.path() / "broken.jsonl").string()});
  CHECK(broken.code == 2);
  CHECK(contains(broken.err, "line 1"));
  CHECK(vf_cli({"ingest", "--in", (dir.path() / "missing.jsonl").string()}).code == 4);
}

TEST_CASE("analyze writes both reports") {
  testing::TempDir dir;
  const auto r = vf_cli({"analyze", "--corpus", testing::fixture("analysis12.jsonl").string(), "--out",
                         dir.path().string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "[analyze] config: "));
  CHECK(std::filesystem::exists(dir.path() / "analysis.csv"));
  CHECK(std::filesystem::exists(dir.path() / "analysis.md"));
}

TEST_CASE("extract then score") {
  testing::TempDir dir;
  const auto corpus = testing::fixture("synthetic/fullfact.jsonl").string();
  const auto extracts = (dir.path() / "extracts.jsonl").string();
  const auto e = vf_cli({"extract", "--corpus", corpus, "--method", "claimdriven", "--out", extracts});
  REQUIRE(e.code == 0);
  const auto lines = testing::read_file(extracts);
  std::istringstream in(lines);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["indices"].size() == 2);
    CHECK(j["config_fingerprint"].get<std::string>().size() == 16);
    ++count;
  }
  CHECK(count == 30);

  const auto s = vf_cli({"score", "--candidates", extracts, "--corpus", corpus});
  CHECK(s.code == 0);
  CHECK(contains(s.out, "scored: 30 excluded: 0"));
  CHECK(contains(s.out, "R1 precision=1.000000 recall=1.000000 f1=1.000000"));

  testing::write_file(dir.path() / "unknown.jsonl", "{\"id\": \"nope\", \"text\": \"x\"}\n");
  CHECK(vf_cli({"score", "--candidates", (dir.path() / "unknown.jsonl").string(), "--corpus", corpus})
            .code == 2);
}

TEST_CASE("extract through a remote embedder") {
  stub::StubServer server;
  server.start();
  testing::TempDir dir;
  const auto out = (dir.path() / "x.jsonl").string();
  const auto r = vf_cli({"extract", "--corpus", testing::fixture("analysis12.jsonl").string(), "--method",
                         "claimdriven", "--k", "2", "--out", out, "--embed-endpoint", server.url()});
  CHECK(r.code == 0);
  CHECK(server.embed_requests() >= 12);
  server.stop();

  const auto down = vf_cli({"extract", "--corpus", testing::fixture("analysis12.jsonl").string(),
                            "--method", "claimdriven", "--out", out, "--embed-endpoint",
                            "http://127.0.0.1:1"});
  CHECK(down.code == 3);
}

TEST_CASE("bench") {
  testing::TempDir dir;
  testing::write_file(dir.path() / "grid.txt", "datasets = fullfact\nselections = top, bottom\n");
  const auto r = vf_cli({"bench", "--grid", (dir.path() / "grid.txt").string(), "--corpus-dir",
                         testing::fixture("synthetic").string(), "--out", (dir.path() / "out").string(),
                         "--jobs", "2"});
  CHECK(r.code == 0);
  const auto csv = testing::read_file(dir.path() / "out" / "bench.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  testing::write_file(dir.path() / "bad.txt", "datasets = fullfact\nmethods = magic\n");
  CHECK(vf_cli({"bench", "--grid", (dir.path() / "bad.txt").string(), "--corpus-dir",
                testing::fixture("synthetic").string(), "--out", (dir.path() / "o2").string()})
            .code == 1);
  testing::write_file(dir.path() / "missing.txt", "datasets = nowhere\n");
  CHECK(vf_cli({"bench", "--grid", (dir.path() / "missing.txt").string(), "--corpus-dir",
                testing::fixture("synthetic").string(), "--out", (dir.path() / "o3").string()})
            .code == 4);
}

TEST_CASE("probe") {
  stub::StubOptions so;
  so.embed_dims = 48;
  stub::StubServer server(so);
  server.start();
  const auto r = vf_cli({"probe", "--endpoint", server.url()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "embed: ok dims=48"));
  CHECK(contains(r.out, "generate: ok"));
  CHECK(contains(r.out, "conformant"));
  CHECK(vf_cli({"probe", "--endpoint", server.url(), "--embed-only"}).code == 0);
  server.stop();
  CHECK(vf_cli({"probe", "--endpoint", "http://127.0.0.1:1"}).code == 3);
  CHECK(vf_cli({"probe", "--endpoint", "nonsense"}).code == 1);
}
