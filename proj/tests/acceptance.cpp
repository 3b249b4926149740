// Acceptance checks, one PASS/FAIL line each. Exit status is the number of
// failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <regex>

#include "preservation.hpp"
#include "solfix/diff.hpp"
#include "solfix/patcher.hpp"
#include "solfix/pipeline.hpp"
#include "solfix/printer.hpp"
#include "solfix/verifier.hpp"
#include "straight_line.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;
using detect::VulnClass;

std::vector<std::string> split_listing();

namespace {

constexpr double kFixtureBudgetMs = 1000.0;
constexpr double kOracleBudgetMs = 10000.0;
constexpr int kOracleFunctions = 500;
constexpr unsigned kOracleSeed = 424242;
constexpr double kFootprintLow = 1.0;
constexpr double kFootprintHigh = 30.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Patched {
  Loaded original;
  patch::PatchResult result;
  verify::VerificationReport report;
  std::unique_ptr<ast::SourceUnit> reparsed;
  /// Over `result.patched`, whose node ids match the original.
  std::unique_ptr<analysis::UnitAnalysis> analysis;
};

Patched run_fixture(const std::string& name, bool force_lock = false) {
  Patched p;
  p.original = load(name);
  patch::PatchConfig config;
  config.force_lock = force_lock;
  p.result = patch::generate_patches(*p.original.unit, p.original.findings, config);
  std::string text = print(p.result.patched);
  p.report = verify::verify_text(text, p.original.findings);
  p.reparsed = std::make_unique<ast::SourceUnit>(parse(text));
  p.analysis = std::make_unique<analysis::UnitAnalysis>(p.result.patched);
  return p;
}

const ast::Stmt* find_stmt(const ast::Block& body, const std::string& printed) {
  for (const auto& s : body.statements)
    if (print_stmt(*s) == printed) return s.get();
  return nullptr;
}

int index_of(const ast::Block& body, const ast::Stmt* s) {
  for (std::size_t i = 0; i < body.statements.size(); ++i)
    if (body.statements[i].get() == s) return static_cast<int>(i);
  return -1;
}

std::vector<std::pair<std::string, std::string>> temp_sources(const patch::ReorderPlan& plan,
                                                              const analysis::UnitAnalysis& a) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : plan.temps)
    if (const auto* root = a.program.root_var(*t.source))
      for (auto l : a.pts.points_to(root)) out.push_back({t.name, a.pts.location(l).name});
  return out;
}

// 1
Outcome fixture_fidelity() {
  Outcome o;
  auto t0 = Clock::now();
  Patched p = run_fixture("fig2_victim");
  double ms = ms_since(t0);
  auto re = p.original.of(VulnClass::Reentrancy);
  int fixable = 0;
  for (const auto* f : re) fixable += f->fixable;
  o.require(re.size() == 1 && fixable == 1, "expected one fixable reentrancy finding");
  if (!o.pass) return o;
  o.require(re[0]->site.description.find("call.value") != std::string::npos, "finding not at the send site");
  bool reorder = false;
  for (const auto& out : p.result.outcomes)
    if (out.finding == re[0]->id()) reorder = out.pattern == "reorder" && out.status == "applied";
  o.require(reorder, "reentrancy not fixed by reorder");
  const auto* fn = p.reparsed->find_contract("Victim")->find_function("refund");
  const auto* write = find_stmt(*fn->body, "userBalances[msg.sender] = 0;");
  const ast::Stmt* call = nullptr;
  std::string temp;
  for (const auto& s : fn->body->statements) {
    std::string text = print_stmt(*s);
    std::smatch m;
    static const std::regex kSend(R"(msg\.sender\.call\.value\((\w+)\)\(\))");
    if (std::regex_search(text, m, kSend)) {
      call = s.get();
      temp = m[1];
    }
  }
  o.require(write && call && index_of(*fn->body, write) < index_of(*fn->body, call),
            "write does not precede the send");
  const ast::Stmt* decl = find_stmt(*fn->body, "var " + temp + " = userBalances[msg.sender];");
  o.require(temp.ends_with("_temp") && decl && index_of(*fn->body, decl) < index_of(*fn->body, write),
            "send amount does not read a temporary snapshot");
  o.require(p.report.pass, "verifier verdict fail");
  o.require(ms < kFixtureBudgetMs, "runtime " + fmt("%.1f ms", ms));
  o.detail = "temp " + temp + ", verdict pass, " + fmt("%.1f ms", ms);
  return o;
}

std::string normalize(std::string line) {
  std::string out;
  bool space = false;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  // The listing ends its first line with a stray period.
  if (!out.empty() && out.back() == '.') out.back() = ';';
  return out;
}

bool contiguous(const std::vector<std::string>& hay, const std::vector<std::string>& needle,
                std::size_t& at) {
  if (needle.size() > hay.size()) return false;
  for (at = 0; at + needle.size() <= hay.size(); ++at)
    if (std::equal(needle.begin(), needle.end(), hay.begin() + at)) return true;
  return false;
}

// 2
Outcome vesting_diff() {
  Outcome o;
  auto t0 = Clock::now();
  Patched p = run_fixture("vesting");
  std::string before = print(*p.original.unit);
  std::string after = print(p.result.patched);
  diff::Diff d = diff::unified_diff(before, after);
  double ms = ms_since(t0);

  auto f = p.original.of(VulnClass::Reentrancy);
  o.require(f.size() == 1, "expected one reentrancy finding");
  if (!o.pass) return o;
  auto plan = patch::plan_reorder(*f[0], *p.original.analysis);
  const auto* fa = p.original.analysis->function(f[0]->site.fn);
  int site = fa->cfg.block_of(f[0]->site.stmt, 0);
  auto writes = detect::storage_writes_after(fa->cfg, fa->dfg, site, p.original.analysis->pts);
  std::set<const ast::Stmt*> write_stmts;
  for (int b : writes) write_stmts.insert(fa->cfg.blocks[b].stmt);
  std::set<const ast::Stmt*> moved(plan.moved.begin(), plan.moved.end());
  o.require(!plan.blocked && moved == write_stmts, "not every write moved");
  o.require(plan.temps.size() == 1 &&
                std::regex_match(plan.temps[0].name, std::regex("totalUnreleasedTokens_temp\\d*")),
            "temporary name");

  std::vector<std::string> plus, minus;
  for (const auto& line : split_listing()) {
    if (line.rfind("+ ", 0) == 0) plus.push_back(normalize(line.substr(2)));
    if (line.rfind("- ", 0) == 0) minus.push_back(normalize(line.substr(2)));
  }
  o.require(d.hunks.size() == 1, "expected one hunk, got " + std::to_string(d.hunks.size()));
  if (!o.pass) return o;
  std::vector<std::string> old_side, new_side;
  std::vector<std::size_t> removed_at, added_at;
  for (const auto& l : d.hunks[0].lines) {
    if (l[0] != '+') {
      if (l[0] == '-') removed_at.push_back(old_side.size());
      old_side.push_back(normalize(l.substr(1)));
    }
    if (l[0] != '-') {
      if (l[0] == '+') added_at.push_back(new_side.size());
      new_side.push_back(normalize(l.substr(1)));
    }
  }
  std::size_t m_at = 0, p_at = 0;
  o.require(contiguous(old_side, minus, m_at), "original block differs from the listing");
  o.require(contiguous(new_side, plus, p_at), "patched block differs from the listing");
  for (auto i : removed_at) o.require(i >= m_at && i < m_at + minus.size(), "removal outside the listing");
  for (auto i : added_at) o.require(i >= p_at && i < p_at + plus.size(), "addition outside the listing");
  o.require(ms < kFixtureBudgetMs, "runtime " + fmt("%.1f ms", ms));
  if (o.pass)
    o.detail = std::to_string(moved.size()) + " writes moved, temp " + plan.temps[0].name + ", " +
               fmt("%.1f ms", ms);
  return o;
}

// 3
Outcome transfer_from() {
  Outcome o;
  Patched p = run_fixture("fig5_transferfrom");
  auto checks = [](const ast::SourceUnit& u) {
    std::vector<std::string> out;
    static const std::regex kCheck(R"(require\((\w+) != address\(0\)\);)");
    const auto* fn = u.find_contract("Coin")->find_function("transferFrom");
    for (const auto& s : fn->body->statements) {
      std::smatch m;
      std::string text = print_stmt(*s);
      if (std::regex_match(text, m, kCheck)) out.push_back(m[1]);
    }
    return out;
  };
  auto before = checks(*p.original.unit);
  auto after = checks(*p.reparsed);
  o.require(before.empty(), "fixture already has checks");
  o.require(after == std::vector<std::string>{"src", "dst"}, "expected checks for src and dst only");
  o.require(p.report.pass, "verifier verdict fail");
  if (o.pass) o.detail = "require(src != address(0)), require(dst != address(0)); verdict pass";
  return o;
}

// 4
Outcome gas_preference() {
  Outcome o;
  auto l = load("fig2_victim");
  const auto* f = l.of(VulnClass::Reentrancy)[0];
  auto lock = patch::apply_lock(*f, *l.analysis, *l.unit, "locked", true);
  auto reorder = patch::apply_reorder(patch::plan_reorder(*f, *l.analysis), *l.unit);
  long lock_gas = patch::estimate_cost(lock).delta;
  long reorder_gas = patch::estimate_cost(reorder).delta;
  o.require(lock_gas == 25000, "lock estimate " + std::to_string(lock_gas));
  o.require(reorder_gas == 5, "reorder estimate " + std::to_string(reorder_gas));
  int unblocked = 0;
  for (const auto& name : corpus_names()) {
    auto c = load(name);
    for (const auto* r : c.of(VulnClass::Reentrancy)) {
      if (!r->fixable || patch::plan_reorder(*r, *c.analysis).blocked) continue;
      ++unblocked;
      auto result = patch::generate_patches(*c.unit, c.findings);
      for (const auto& out : result.outcomes)
        if (out.finding == r->id())
          o.require(out.pattern == "reorder", name + " used " + out.pattern + " while unblocked");
    }
  }
  o.require(unblocked > 0, "no unblocked reentrancy fixtures");
  if (o.pass)
    o.detail = "lock 25000, reorder 5, reorder chosen in " + std::to_string(unblocked) + " unblocked cases";
  return o;
}

// 5
Outcome dependence_oracle() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937 rng(kOracleSeed);
  long pairs = 0, matched = 0;
  for (int i = 0; i < kOracleFunctions; ++i) {
    GenFunction g = random_function(rng);
    auto l = load_source(g.source());
    const auto* fn = l.function("G", "f");
    const auto* fa = l.analysis->function(fn);
    std::map<int, int> index;
    for (std::size_t k = 0; k < fn->body->statements.size(); ++k)
      index[fa->cfg.block_of(fn->body->statements[k].get(), 0)] = static_cast<int>(k);
    std::set<DepTuple> got;
    for (const auto& d : analysis::classify_dependences(fa->cfg, fa->dfg))
      got.insert({index.at(d.from), index.at(d.to), analysis::to_string(d.kind),
                  l.analysis->pts.location(d.location).name});
    auto want = brute_force_dependences(g);
    int n = static_cast<int>(g.body.size());
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        ++pairs;
        auto slice = [&](const std::set<DepTuple>& s) {
          std::set<DepTuple> out;
          for (const auto& t : s)
            if (std::get<0>(t) == a && std::get<1>(t) == b) out.insert(t);
          return out;
        };
        matched += slice(got) == slice(want);
      }
    }
  }
  double ms = ms_since(t0);
  o.require(matched == pairs, std::to_string(pairs - matched) + " of " + std::to_string(pairs) + " pairs differ");
  o.require(ms < kOracleBudgetMs, "runtime " + fmt("%.0f ms", ms));
  if (o.pass)
    o.detail = std::to_string(kOracleFunctions) + " functions, " + std::to_string(pairs) +
               " pairs, 100% match, " + fmt("%.0f ms", ms);
  return o;
}

// 6
Outcome dependence_preservation() {
  Outcome o;
  int fixtures = 0, checked = 0, via_temp = 0;
  for (const auto& name : corpus_names()) {
    Patched p = run_fixture(name);
    for (const auto& out : p.result.outcomes) {
      if (out.pattern != "reorder" || out.status != "applied") continue;
      const detect::Finding* f = nullptr;
      for (const auto& x : p.original.findings)
        if (x.id() == out.finding) f = &x;
      auto plan = patch::plan_reorder(*f, *p.original.analysis);
      auto r = check_preservation(*p.original.analysis, *p.analysis, *f,
                                  temp_sources(plan, *p.original.analysis));
      ++fixtures;
      checked += r.checked;
      via_temp += r.via_temp;
      o.require(r.broken.empty(), name + ": " + (r.broken.empty() ? "" : r.broken[0]));
      o.require(r.writes_after_call == 0, name + ": storage write reachable from the call");
    }
  }
  o.require(fixtures >= 2, "too few reorder fixtures");
  if (o.pass)
    o.detail = std::to_string(fixtures) + " reorders, " + std::to_string(checked) + " dependences, " +
               std::to_string(via_temp) + " removed through temporaries";
  return o;
}

// 7
Outcome ensemble_precision() {
  Outcome o;
  auto fp = load("extcall_controls_write");
  for (const auto* f : fp.of(VulnClass::Reentrancy))
    o.require(!f->fixable, "controlled write reported fixable");
  Patched p = run_fixture("blocked_reorder");
  bool lock = false;
  for (const auto& out : p.result.outcomes)
    lock = lock || (out.pattern == "lock" && out.status == "applied");
  o.require(lock, "blocked reorder did not fall back to the lock");
  o.require(p.report.pass && p.report.residual.empty(), "lock patch does not verify clean");
  if (o.pass) o.detail = "0 fixable controlled-write findings; blocked reorder locked and verified";
  return o;
}

// 8
Outcome round_trip() {
  Outcome o;
  int files = 0, idempotent = 0;
  for (const auto& name : corpus_names()) {
    auto first = parse(corpus_source(name));
    auto second = parse(print(first));
    o.require(structurally_equal(first, second), name + " does not round-trip");
    ++files;
    Patched p = run_fixture(name);
    if (!p.report.pass) continue;
    auto again = load_unit(p.reparsed->clone());
    auto r = patch::generate_patches(*again.unit, again.findings);
    o.require(r.scripts.empty(), name + " patched twice");
    ++idempotent;
  }
  if (o.pass)
    o.detail = std::to_string(files) + "/" + std::to_string(files) + " round-trip, " +
               std::to_string(idempotent) + " verified outputs idempotent";
  return o;
}

// 9
Outcome unfixability() {
  Outcome o;
  const std::pair<const char*, const char*> cases[] = {
      {"timestamp_reentrancy", "timestamp-dependent-write"},
      {"non_address_param", "non-address-parameter"},
      {"library_locked", "library-contract"},
      {"handled_send", "return-value-handled"},
  };
  for (const auto& [name, reason] : cases) {
    pipeline::RunConfig c;
    c.inputs = {corpus_path(std::string(name) + ".sol")};
    c.write_files = false;
    auto r = pipeline::run(c);
    int unfixable = 0;
    std::string got;
    for (const auto& file : r.files)
      for (const auto& ct : file.contracts)
        for (const auto& f : ct.findings)
          if (!f.fixable) {
            ++unfixable;
            got = f.reason;
          }
    o.require(unfixable == 1 && got == reason, std::string(name) + ": reason " + got);
    o.require(r.exit_code() == 1, std::string(name) + ": exit " + std::to_string(r.exit_code()));
  }
  if (o.pass) o.detail = "4 fixtures, one unfixable finding each, exit 1";
  return o;
}

// 10
Outcome footprint() {
  Outcome o;
  pipeline::RunConfig c;
  c.inputs = {SOLFIX_CORPUS_DIR};
  c.write_files = false;
  auto r = pipeline::run(c);
  int contracts = 0, lines = 0;
  for (const auto& f : r.files)
    for (const auto& ct : f.contracts) {
      bool patched = std::any_of(ct.patches.begin(), ct.patches.end(),
                                 [](const patch::PatchOutcome& p) { return p.status == "applied"; });
      if (!patched) continue;
      ++contracts;
      lines += ct.changed_lines;
    }
  double mean = contracts ? static_cast<double>(lines) / contracts : 0.0;
  o.require(contracts > 0, "nothing patched");
  o.require(mean >= kFootprintLow && mean <= kFootprintHigh, "mean " + fmt("%.2f", mean));
  if (o.pass)
    o.detail = fmt("mean %.2f changed lines", mean) + " over " + std::to_string(contracts) +
               " patched contracts";
  return o;
}

}  // namespace

std::vector<std::string> split_listing() {
  std::vector<std::string> out;
  std::istringstream in(read_text(std::string(SOLFIX_DATA_DIR) + "/vesting_listing.txt"));
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"fixture fidelity (victim reorder)", fixture_fidelity},
      {"vesting diff reproduction", vesting_diff},
      {"transferFrom zero-address checks", transfer_from},
      {"gas preference", gas_preference},
      {"dependence oracle equivalence", dependence_oracle},
      {"dependence preservation", dependence_preservation},
      {"ensemble precision fixtures", ensemble_precision},
      {"round-trip and idempotence", round_trip},
      {"unfixability ledger", unfixability},
      {"patch footprint", footprint},
  };
  int failures = 0, n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
  }
  return failures;
}
