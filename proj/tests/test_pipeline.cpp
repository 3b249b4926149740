#include <doctest.h>

#include <filesystem>
#include <random>
#include <json.hpp>

#include "solfix/diff.hpp"
#include "solfix/pipeline.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;
using json = nlohmann::ordered_json;

namespace {

pipeline::RunConfig quiet(std::vector<std::string> inputs, pipeline::Mode mode = pipeline::Mode::Fix) {
  pipeline::RunConfig c;
  c.inputs = std::move(inputs);
  c.mode = mode;
  c.write_files = false;
  return c;
}

json strip_timing(json j) {
  for (auto& c : j["contracts"]) c.erase("timing");
  return j;
}

}  // namespace

TEST_CASE("empty run is an empty document") {
  pipeline::RunResult r;
  CHECK(pipeline::report_json(r) == "{\n  \"contracts\": []\n}\n");
  CHECK(r.exit_code() == 0);
}

TEST_CASE("detect mode on a clean contract") {
  auto r = pipeline::run(quiet({corpus_path("clean.sol")}, pipeline::Mode::Detect));
  CHECK(r.exit_code() == 0);
  auto j = json::parse(pipeline::report_json(r));
  REQUIRE(j["contracts"].size() == 1);
  CHECK(j["contracts"][0]["findings"].empty());
}

TEST_CASE("single finding gives one findings entry and one patch entry") {
  auto r = pipeline::run(quiet({corpus_path("unhandled_send.sol")}));
  CHECK(r.exit_code() == 0);
  auto j = json::parse(pipeline::report_json(r));
  const auto& c = j["contracts"][0];
  CHECK(c["findings"].size() == 1);
  CHECK(c["patches"].size() == 1);
  CHECK(c["patches"][0]["status"] == "applied");
  CHECK(c["verification"]["verdict"] == "pass");
}

TEST_CASE("timestamp write exits 1 with its reason") {
  auto r = pipeline::run(quiet({corpus_path("timestamp_reentrancy.sol")}));
  CHECK(r.exit_code() == 1);
  auto j = json::parse(pipeline::report_json(r));
  CHECK(j["contracts"][0]["findings"][0]["reason"] == "timestamp-dependent-write");
}

TEST_CASE("parse errors exit 2 without touching other files") {
  auto dir = std::filesystem::temp_directory_path() / "solfix_pipeline_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "broken.sol") << "contract A { function f( }";
    std::ofstream(dir / "fine.sol") << corpus_source("unhandled_send");
  }
  auto both = pipeline::run(quiet({dir.string()}));
  auto alone = pipeline::run(quiet({(dir / "fine.sol").string()}));
  CHECK(both.exit_code() == 2);
  REQUIRE(both.files.size() == 2);
  CHECK(both.files[0].error_kind == "syntax");
  CHECK(both.files[1].patched_text == alone.files[0].patched_text);
  auto j = json::parse(pipeline::report_json(both, false));
  auto k = json::parse(pipeline::report_json(alone, false));
  CHECK(j["contracts"][1] == k["contracts"][0]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports are deterministic across runs and worker counts") {
  auto one = quiet({SOLFIX_CORPUS_DIR});
  auto many = one;
  many.jobs = 4;
  auto a = pipeline::report_json(pipeline::run(one), false);
  auto b = pipeline::report_json(pipeline::run(many), false);
  CHECK(a == b);
  auto with_timing = json::parse(pipeline::report_json(pipeline::run(one)));
  CHECK(strip_timing(with_timing).dump() == json::parse(a).dump());
}

TEST_CASE("text summary subtotals add up") {
  auto r = pipeline::run(quiet({corpus_path("mixed.sol"), corpus_path("all_classes.sol")}));
  std::string text = pipeline::report_text(r);
  int sum = 0, total = -1;
  std::istringstream in(text.substr(text.find("\nsummary\n")));
  for (std::string line; std::getline(in, line);) {
    auto colon = line.find(':');
    if (colon == std::string::npos || line.find("fixed") != std::string::npos) continue;
    int n = std::stoi(line.substr(colon + 1));
    if (line.find("total") != std::string::npos)
      total = n;
    else
      sum += n;
  }
  std::size_t findings = 0;
  for (const auto& f : r.files)
    for (const auto& c : f.contracts) findings += c.findings.size();
  CHECK(total == sum);
  CHECK(total == static_cast<int>(findings));
}

TEST_CASE("directory inputs skip patched outputs") {
  auto dir = std::filesystem::temp_directory_path() / "solfix_collect_test";
  std::filesystem::create_directories(dir / "sub");
  std::ofstream(dir / "a.sol") << "contract A {}";
  std::ofstream(dir / "a.fixed.sol") << "contract A {}";
  std::ofstream(dir / "sub" / "b.sol") << "contract B {}";
  std::ofstream(dir / "notes.txt") << "";
  auto got = pipeline::collect_inputs({dir.string()});
  REQUIRE(got.size() == 2);
  CHECK(got[0].ends_with("a.sol"));
  CHECK(got[1].ends_with("b.sol"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fix mode writes side-by-side outputs") {
  auto dir = std::filesystem::temp_directory_path() / "solfix_outputs_test";
  std::filesystem::remove_all(dir);
  pipeline::RunConfig c;
  c.inputs = {corpus_path("fig2_victim.sol"), corpus_path("fig5_transferfrom.sol"),
              corpus_path("two_sends.sol"), corpus_path("locked_ether.sol"),
              corpus_path("all_classes.sol")};
  c.out_dir = dir.string();
  c.dump_graphs = true;
  auto r = pipeline::run(c);
  CHECK(r.exit_code() == 0);
  int fixed = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.ends_with(".fixed.sol")) ++fixed;
  }
  CHECK(fixed == 5);
  CHECK(std::filesystem::exists(dir / "fig2_victim.diff"));
  CHECK(std::filesystem::exists(dir / "fig2_victim.graphs.txt"));
  for (const auto& f : r.files)
    if (f.path.ends_with("fig2_victim.sol"))
      CHECK(read_text((dir / "fig2_victim.fixed.sol").string()) == f.patched_text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify mode compares against a given patched file") {
  auto fixed = pipeline::run(quiet({corpus_path("two_sends.sol")}));
  auto dir = std::filesystem::temp_directory_path() / "solfix_verify_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "p.sol") << fixed.files[0].patched_text;
  auto c = quiet({corpus_path("two_sends.sol")}, pipeline::Mode::Verify);
  c.patched = (dir / "p.sol").string();
  CHECK(pipeline::run(c).exit_code() == 0);
  c.patched = corpus_path("two_sends.sol");
  CHECK(pipeline::run(c).exit_code() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unified diff counts and hunks") {
  auto d = diff::unified_diff("a\nb\nc\nd\n", "a\nB\nc\nd\ne\n", 1);
  CHECK(d.added == 2);
  CHECK(d.removed == 1);
  CHECK(d.text("x", "y") ==
        "--- x\n+++ y\n"
        "@@ -1,4 +1,5 @@\n"
        " a\n-b\n+B\n c\n d\n+e\n");
  CHECK(diff::unified_diff("same\n", "same\n").empty());
  auto far = diff::unified_diff("1\n2\n3\n4\n5\n6\n7\n8\n9\n", "x\n2\n3\n4\n5\n6\n7\n8\ny\n", 1);
  CHECK(far.hunks.size() == 2);
  CHECK(far.hunks[1].old_start == 8);
}

TEST_CASE("diff against random edits reconstructs both sides") {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::string> a;
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) a.push_back(std::to_string(rng() % 5));
    std::vector<std::string> b = a;
    int edits = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int e = 0; e < edits; ++e) {
      if (!b.empty() && rng() % 2) b.erase(b.begin() + rng() % b.size());
      else b.insert(b.begin() + (b.empty() ? 0 : rng() % (b.size() + 1)), "n" + std::to_string(e));
    }
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += x + "\n";
      return s;
    };
    // Huge context puts everything in one hunk: its two sides are the files.
    auto d = diff::unified_diff(join(a), join(b), 1000);
    std::vector<std::string> old_side, new_side;
    for (const auto& h : d.hunks)
      for (const auto& l : h.lines) {
        if (l[0] != '+') old_side.push_back(l.substr(1));
        if (l[0] != '-') new_side.push_back(l.substr(1));
      }
    if (a == b) {
      CHECK(d.empty());
      continue;
    }
    CHECK(old_side == a);
    CHECK(new_side == b);
    // An LCS diff never needs more changes than the edits applied.
    CHECK(d.changed() <= edits);
  }
}
