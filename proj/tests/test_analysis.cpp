#include <doctest.h>

#include <random>

#include "solfix/ast_walk.hpp"
#include "solfix/cfg.hpp"
#include "straight_line.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;

namespace {

std::set<std::string> names(const analysis::PointsToMap& pts, const std::set<analysis::LocId>& ls) {
  std::set<std::string> out;
  for (auto l : ls) out.insert(pts.location(l).name);
  return out;
}

const ast::VarDecl* local(const ast::FunctionDef& fn, const std::string& name) {
  const ast::VarDecl* out = nullptr;
  ast::walk_stmt(*fn.body, [&](const ast::Stmt& s) {
    if (s.kind != ast::StmtKind::VarDecl) return;
    for (const auto& d : static_cast<const ast::VarDeclStmt&>(s).decls)
      if (d && d->name == name) out = d.get();
  });
  return out;
}

}  // namespace

TEST_CASE("reference creation follows the two aliasing rules") {
  auto l = load("fig4_references");
  const auto* fn = l.function("References", "f");
  const auto& pts = l.analysis->pts;
  CHECK(names(pts, pts.points_to(local(*fn, "y"))) == std::set<std::string>{"data"});
  CHECK(names(pts, pts.points_to(local(*fn, "z"))) == std::set<std::string>{"x", "z"});
  CHECK(names(pts, pts.points_to(local(*fn, "x"))) == std::set<std::string>{"x"});
  // A value copy never aliases.
  CHECK(names(pts, pts.points_to(local(*fn, "b"))) == std::set<std::string>{"b"});
  CHECK(pts.is_reference(local(*fn, "y")));
  CHECK_FALSE(pts.is_reference(local(*fn, "a")));
}

TEST_CASE("storage struct reference writes reach the mapping") {
  auto l = load("vesting");
  const auto* fn = l.function("Vesting", "addVesting");
  const auto& pts = l.analysis->pts;
  auto target = pts.points_to(local(*fn, "vestingSchedule"));
  CHECK(names(pts, target) == std::set<std::string>{"vestingSchedules"});
  CHECK(pts.location(*target.begin()).is_storage());
}

TEST_CASE("def-use edges follow aliases") {
  auto l = load("fig4_references");
  const auto* fa = l.fa("References", "f");
  const auto* fn = l.function("References", "f");
  auto block = [&](int k) { return fa->cfg.block_of(fn->body->statements[k].get(), 0); };
  auto has = [&](int from, int to, const std::string& var) {
    for (const auto& e : fa->dfg.edges)
      if (e.from == block(from) && e.to == block(to) &&
          l.analysis->pts.location(e.location).name == var)
        return true;
    return false;
  };
  CHECK(has(4, 5, "x"));  // z[1] = 2 feeds x[1]
  CHECK(has(3, 7, "data"));  // y[0] = 1 feeds data.push
  CHECK(has(0, 5, "x"));
}

TEST_CASE("cfg inlines modifiers around the body") {
  auto l = load("mixed");
  const auto* fa = l.fa("Mixed", "payFee");
  REQUIRE(fa);
  int modifier_blocks = 0, body_blocks = 0;
  for (const auto& b : fa->cfg.blocks) {
    if (b.kind != analysis::BlockKind::Statement) continue;
    (b.scope == 0 ? body_blocks : modifier_blocks)++;
  }
  CHECK(modifier_blocks == 1);
  CHECK(body_blocks == 2);
  // The modifier's require comes first and reaches the body.
  const auto* fn = l.function("Mixed", "payFee");
  int first = fa->cfg.block_of(fn->body->statements[0].get(), 0);
  bool reached = false;
  for (const auto& b : fa->cfg.blocks)
    if (b.scope == 1 && b.kind == analysis::BlockKind::Statement) reached = fa->cfg.reaches(b.id, first);
  CHECK(reached);
}

TEST_CASE("cfg records loops and enclosing conditions") {
  auto l = load_source(
      "contract A { uint x; function f(uint n) public {"
      " for (uint i = 0; i < n; i++) { if (i > 2) { x = i; } } x = 0; } }");
  const auto* fa = l.fa("A", "f");
  int deepest = 0;
  std::size_t most_conditions = 0;
  for (const auto& b : fa->cfg.blocks) {
    deepest = std::max(deepest, b.loop_depth);
    if (b.kind == analysis::BlockKind::Statement)
      most_conditions = std::max(most_conditions, b.conditions.size());
  }
  CHECK(deepest == 1);
  CHECK(most_conditions == 2);
  const auto* fn = l.function("A", "f");
  int last = fa->cfg.block_of(fn->body->statements[1].get(), 0);
  CHECK(fa->cfg.blocks[last].loop_depth == 0);
  CHECK(fa->cfg.blocks[last].conditions.empty());
}

TEST_CASE("summaries close over internal callees") {
  auto l = load_source(
      "contract A { uint x; uint y;"
      " function a() public { b(); }"
      " function b() internal { x = 1; c(); }"
      " function c() internal { y = x; msg.sender.transfer(1); } }");
  const auto& s = l.analysis->summaries;
  const auto& pts = l.analysis->pts;
  const auto* a = s.of(l.function("A", "a"));
  REQUIRE(a);
  CHECK(names(pts, a->state_written) == std::set<std::string>{"x", "y"});
  CHECK(names(pts, a->state_read) == std::set<std::string>{"x"});
  CHECK(a->ether_transfer);
  CHECK(a->external_call);
  const auto* b = s.of(l.function("A", "b"));
  CHECK(b->callees.count(l.function("A", "c")));
}

TEST_CASE("dependences on random straight-line functions match brute force") {
  std::mt19937 rng(20240501);
  for (int round = 0; round < 200; ++round) {
    GenFunction g = random_function(rng);
    std::string src = g.source();
    CAPTURE(src);
    auto l = load_source(src);
    const auto* fn = l.function("G", "f");
    const auto* fa = l.analysis->function(fn);
    REQUIRE(fa);
    std::map<int, int> index;
    for (std::size_t k = 0; k < fn->body->statements.size(); ++k)
      index[fa->cfg.block_of(fn->body->statements[k].get(), 0)] = static_cast<int>(k);
    std::set<DepTuple> got;
    for (const auto& d : analysis::classify_dependences(fa->cfg, fa->dfg))
      got.insert({index.at(d.from), index.at(d.to), analysis::to_string(d.kind),
                  l.analysis->pts.location(d.location).name});
    CHECK(got == brute_force_dependences(g));

    std::set<std::tuple<int, int, std::string>> edges;
    for (const auto& e : fa->dfg.edges)
      if (index.count(e.from) && index.count(e.to))
        edges.insert({index[e.from], index[e.to], l.analysis->pts.location(e.location).name});
    CHECK(edges == brute_force_def_use(g));
  }
}
