#include <doctest.h>

#include "preservation.hpp"
#include "solfix/patcher.hpp"
#include "solfix/printer.hpp"
#include "solfix/verifier.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;
using detect::VulnClass;

namespace {

std::string body_of(const ast::SourceUnit& u, const std::string& contract, const std::string& fn) {
  return print_member(*u.find_contract(contract)->find_function(fn));
}

ast::SourceUnit applied(const Loaded& l, const patch::EditScript& s) {
  auto copy = l.unit->clone();
  patch::apply(s, copy);
  return copy;
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("bare send is wrapped in require and nothing else changes") {
  auto l = load("unhandled_send");
  auto f = l.of(VulnClass::UnhandledException);
  REQUIRE(f.size() == 1);
  auto s = patch::fix_unhandled_exception(*f[0], *l.analysis, *l.unit);
  REQUIRE(s.edits.size() == 1);
  CHECK(s.edits[0].kind == patch::EditKind::WrapInRequire);
  CHECK(s.edits[0].finding == f[0]->id());
  auto out = applied(l, s);
  CHECK(count(print(out), "require(king.send(prize));") == 1);
  CHECK(body_of(out, "King", "claimThrone") == body_of(*l.unit, "King", "claimThrone"));
  auto reparsed = parse(print(out));
  CHECK(structurally_equal(reparsed, parse(print(reparsed))));
}

TEST_CASE("call with value is wrapped too") {
  auto l = load("fig2_victim");
  auto f = l.of(VulnClass::UnhandledException);
  auto out = applied(l, patch::fix_unhandled_exception(*f[0], *l.analysis, *l.unit));
  CHECK(count(print(out), "require(msg.sender.call.value(userBalances[msg.sender])());") == 1);
}

TEST_CASE("newer call syntax captures the success flag") {
  auto l = load("modern_call");
  auto f = l.of(VulnClass::UnhandledException);
  auto out = applied(l, patch::fix_unhandled_exception(*f[0], *l.analysis, *l.unit));
  std::string text = print(out);
  CHECK(count(text, "(bool success, ) = msg.sender.call{value: amount}(\"\");") == 1);
  CHECK(count(text, "require(success);") == 1);
}

TEST_CASE("an already consumed result is not applicable") {
  auto l = load("unhandled_send");
  detect::Finding stale = *l.of(VulnClass::UnhandledException)[0];
  auto patched = load_unit(applied(l, patch::fix_unhandled_exception(stale, *l.analysis, *l.unit)));
  // Point the finding at the now-wrapped statement and call.
  const auto* fn = patched.function("King", "payOut");
  stale.site.fn = fn;
  stale.site.stmt = fn->body->statements.back().get();
  const auto& wrap = static_cast<const ast::FunctionCall&>(
      *static_cast<const ast::ExprStmt&>(*stale.site.stmt).expr);
  stale.site.call = static_cast<const ast::FunctionCall*>(wrap.args[0].get());
  CHECK_THROWS_AS(patch::fix_unhandled_exception(stale, *patched.analysis, *patched.unit),
                  patch::NotApplicable);
}

TEST_CASE("victim reorder snapshots the balance") {
  auto l = load("fig2_victim");
  auto f = l.of(VulnClass::Reentrancy);
  auto plan = patch::plan_reorder(*f[0], *l.analysis);
  REQUIRE_FALSE(plan.blocked);
  REQUIRE(plan.moved.size() == 1);
  CHECK(print_stmt(*plan.moved[0]) == "userBalances[msg.sender] = 0;");
  REQUIRE(plan.temps.size() == 1);
  CHECK(plan.temps[0].name == "userBalances_temp");
  CHECK(plan.temps[0].type.empty());
  bool temp_action = false;
  for (const auto& d : plan.dependences) {
    CHECK(d.action != patch::Action::Blocked);
    if (d.action == patch::Action::IntroduceTemp) temp_action = true;
  }
  CHECK(temp_action);

  auto s = patch::apply_reorder(plan, *l.unit);
  CHECK(patch::estimate_cost(s).delta == 5);
  auto out = load_unit(applied(l, s));
  CHECK(body_of(*out.unit, "Victim", "refund") ==
        "function refund() public {\n"
        "    require(userBalances[msg.sender] > 0);\n"
        "    var userBalances_temp = userBalances[msg.sender];\n"
        "    userBalances[msg.sender] = 0;\n"
        "    msg.sender.call.value(userBalances_temp)();\n"
        "}");
  auto p = check_preservation(*l.analysis, *out.analysis, *f[0], {{"userBalances_temp", "userBalances"}});
  CHECK(p.broken.empty());
  CHECK(p.via_temp >= 1);
  CHECK(p.writes_after_call == 0);
}

TEST_CASE("vesting reorder moves every write and keeps their order") {
  auto l = load("vesting");
  auto f = l.of(VulnClass::Reentrancy);
  auto plan = patch::plan_reorder(*f[0], *l.analysis);
  REQUIRE_FALSE(plan.blocked);
  CHECK(plan.moved.size() == 6);
  REQUIRE(plan.temps.size() == 1);
  CHECK(plan.temps[0].name == "totalUnreleasedTokens_temp");
  for (std::size_t i = 1; i < plan.moved.size(); ++i)
    CHECK(plan.moved[i - 1]->span.begin < plan.moved[i]->span.begin);
  auto out = load_unit(applied(l, patch::apply_reorder(plan, *l.unit)));
  auto p = check_preservation(*l.analysis, *out.analysis, *f[0],
                              {{"totalUnreleasedTokens_temp", "totalUnreleasedTokens"}});
  CHECK(p.broken.empty());
  CHECK(p.writes_after_call == 0);
  CHECK(out.of(VulnClass::Reentrancy).empty());
}

TEST_CASE("newer pragmas declare temporaries with their type") {
  auto l = load_source(
      "pragma solidity ^0.5.0;\n"
      "contract T { function g(uint v) public; }\n"
      "contract A { T t; uint total;\n"
      "  function f() public { t.g(total); total = 0; } }");
  auto plan = patch::plan_reorder(*l.of(VulnClass::Reentrancy)[0], *l.analysis);
  REQUIRE(plan.temps.size() == 1);
  CHECK(plan.temps[0].type == "uint256");
  auto out = applied(l, patch::apply_reorder(plan, *l.unit));
  CHECK(count(print(out), "uint256 total_temp = total;") == 1);
}

TEST_CASE("independent writes move together in their original order") {
  auto l = load_source(
      "contract T { function g() public; }\n"
      "contract A { T t; uint x; uint y;\n"
      "  function f() public { t.g(); x = 1; y = 2; } }");
  auto plan = patch::plan_reorder(*l.of(VulnClass::Reentrancy)[0], *l.analysis);
  REQUIRE_FALSE(plan.blocked);
  CHECK(plan.temps.empty());
  auto out = applied(l, patch::apply_reorder(plan, *l.unit));
  CHECK(body_of(out, "A", "f") == "function f() public {\n    x = 1;\n    y = 2;\n    t.g();\n}");
}

TEST_CASE("a write fed by the call blocks the reorder") {
  auto l = load("blocked_reorder");
  auto plan = patch::plan_reorder(*l.of(VulnClass::Reentrancy)[0], *l.analysis);
  CHECK(plan.blocked);
  CHECK_THROWS_AS(patch::apply_reorder(plan, *l.unit), patch::PlanBlocked);
}

TEST_CASE("temporary names avoid collisions") {
  auto l = load_source(
      "contract A { mapping(address => uint) b; uint b_temp;\n"
      "  function f() public { msg.sender.call.value(b[msg.sender])(); b[msg.sender] = 0; } }");
  auto plan = patch::plan_reorder(*l.of(VulnClass::Reentrancy)[0], *l.analysis);
  REQUIRE(plan.temps.size() == 1);
  CHECK(plan.temps[0].name == "b_temp2");
}

TEST_CASE("forced lock guards the victim") {
  auto l = load("fig2_victim");
  auto s = patch::apply_lock(*l.of(VulnClass::Reentrancy)[0], *l.analysis, *l.unit, "locked", true);
  CHECK(patch::estimate_cost(s).delta == 25000);
  auto out = applied(l, s);
  CHECK(body_of(out, "Victim", "refund") ==
        "function refund() public {\n"
        "    require(!locked);\n"
        "    locked = true;\n"
        "    require(userBalances[msg.sender] > 0);\n"
        "    msg.sender.call.value(userBalances[msg.sender])();\n"
        "    userBalances[msg.sender] = 0;\n"
        "    locked = false;\n"
        "}");
  CHECK(count(print(out), "bool private locked;") == 1);
}

TEST_CASE("lock releases before every return") {
  auto l = load_source(
      "contract A { uint x;\n"
      "  function f(uint v) public returns (uint) {\n"
      "    msg.sender.call.value(v)();\n"
      "    if (v > 1) return 1;\n"
      "    x = v;\n"
      "    return 2;\n"
      "  } }");
  auto s = patch::apply_lock(*l.of(VulnClass::Reentrancy)[0], *l.analysis, *l.unit, "locked", true);
  std::string fn = body_of(applied(l, s), "A", "f");
  CHECK(count(fn, "locked = false;") == 2);
  CHECK(count(fn, "locked = false;\n        return 1;") == 1);
  CHECK(count(fn, "locked = false;\n    return 2;") == 1);
}

TEST_CASE("zero-address checks land in parameter order") {
  auto l = load_source(
      "contract A { mapping(address => uint) m;\n"
      "  function f(address a, address b, address c) public {\n"
      "    require(b != address(0));\n"
      "    m[a] = 1; m[b] = 2; m[c] = 3; } }");
  auto f = l.of(VulnClass::MissingInputValidation);
  REQUIRE(f.size() == 2);
  patch::PatchResult r = patch::generate_patches(*l.unit, l.findings);
  CHECK(body_of(r.patched, "A", "f") ==
        "function f(address a, address b, address c) public {\n"
        "    require(a != address(0));\n"
        "    require(c != address(0));\n"
        "    require(b != address(0));\n"
        "    m[a] = 1;\n"
        "    m[b] = 2;\n"
        "    m[c] = 3;\n"
        "}");
}

TEST_CASE("contract-typed parameters are cast for the check") {
  auto l = load_source(
      "contract T { function g() public; }\n"
      "contract A { T t; function set(T v) public { t = v; } }");
  auto f = l.of(VulnClass::MissingInputValidation);
  REQUIRE(f.size() == 1);
  auto out = applied(l, patch::fix_missing_input_validation(*f[0], *l.analysis, *l.unit));
  CHECK(count(print(out), "require(address(v) != address(0));") == 1);
}

TEST_CASE("withdraw synthesis reuses an owner") {
  auto l = load("locked_with_owner");
  auto s = patch::fix_locked_ether(l.findings[0], *l.analysis, *l.unit);
  REQUIRE(s.edits.size() == 1);
  CHECK(s.edits[0].kind == patch::EditKind::AddFunction);
  auto out = print(applied(l, s));
  CHECK(count(out, "require(msg.sender == owner);") == 1);
}

TEST_CASE("withdraw synthesis adds an owner when missing") {
  auto l = load("locked_ether");
  auto s = patch::fix_locked_ether(l.findings[0], *l.analysis, *l.unit);
  CHECK(s.edits.size() == 3);
  auto out = load_unit(applied(l, s));
  // Exactly one way out, guarded by the owner.
  int exits = 0;
  for (const auto* fn : out.unit->find_contract("Donations")->functions()) {
    std::string text = print_member(*fn);
    if (text.find(".transfer(") == std::string::npos) continue;
    ++exits;
    CHECK(text.find("require(msg.sender == owner);") != std::string::npos);
  }
  CHECK(exits == 1);
  CHECK(count(print(*out.unit), "owner = msg.sender;") == 1);
  CHECK(out.findings.empty());
}

TEST_CASE("old compilers get a named constructor") {
  auto l = load_source("pragma solidity ^0.4.18;\ncontract Jar { function () public payable {} }");
  auto out = print(applied(l, patch::fix_locked_ether(l.findings[0], *l.analysis, *l.unit)));
  CHECK(count(out, "function Jar() public {") == 1);
}

TEST_CASE("cost bands") {
  patch::EditScript empty;
  CHECK(patch::estimate_cost(empty).delta == 0);
  empty.pattern = patch::Pattern::Lock;
  CHECK(patch::estimate_cost(empty).delta == 0);
}

TEST_CASE("one finding of each class gives four applied scripts") {
  auto l = load("all_classes");
  REQUIRE(l.findings.size() == 4);
  auto r = patch::generate_patches(*l.unit, l.findings);
  CHECK(r.scripts.size() == 4);
  for (const auto& o : r.outcomes) CHECK(o.status == "applied");
  auto v = verify::verify_text(print(r.patched), l.findings);
  CHECK(v.pass);
  CHECK(v.residual.empty());
}

TEST_CASE("only unfixable findings leave the unit alone") {
  auto l = load("timestamp_reentrancy");
  auto r = patch::generate_patches(*l.unit, l.findings);
  CHECK(r.scripts.empty());
  CHECK(print(r.patched) == print(*l.unit));
}

TEST_CASE("blocked reorder falls back to the lock with a reason") {
  auto l = load("blocked_reorder");
  auto r = patch::generate_patches(*l.unit, l.findings);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes[0].pattern == "lock");
  CHECK(r.outcomes[0].gas == 25000);
  CHECK(r.outcomes[0].note.find("reorder blocked") == 0);
}

TEST_CASE("patching a patched unit does nothing") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    auto l = load(name);
    auto once = patch::generate_patches(*l.unit, l.findings);
    auto again = load_unit(parse(print(once.patched)));
    auto twice = patch::generate_patches(*again.unit, again.findings);
    CHECK(twice.scripts.empty());
  }
}

TEST_CASE("functions without findings print identically after patching") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    auto l = load(name);
    std::set<std::string> touched;
    for (const auto& f : l.findings)
      if (f.fixable) touched.insert(f.site.contract + "." + f.site.function);
    auto r = patch::generate_patches(*l.unit, l.findings);
    for (const auto& c : l.unit->contracts) {
      for (const auto* fn : c->functions()) {
        if (touched.count(c->name + "." + fn->signature())) continue;
        if (fn->is_constructor()) continue;
        const auto* after = r.patched.find_contract(c->name);
        REQUIRE(after);
        const ast::FunctionDef* same = nullptr;
        for (const auto* g : after->functions())
          if (g->id == fn->id) same = g;
        REQUIRE(same);
        CHECK(print_member(*same) == print_member(*fn));
      }
    }
  }
}
