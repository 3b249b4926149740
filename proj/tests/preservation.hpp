#pragma once

// Compares statement-level dependences of a function before and after a
// reorder patch. Statements are matched by node id, locations by name.

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "solfix/analysis.hpp"
#include "solfix/ast_walk.hpp"
#include "solfix/detectors.hpp"

namespace solfix::testing {

struct Preservation {
  std::vector<std::string> broken;
  int checked = 0;
  int via_temp = 0;
  /// Storage writes reachable from the call in the patched function.
  int writes_after_call = 0;
};

namespace detail {

using Key = std::tuple<ast::NodeId, ast::NodeId, analysis::DepKind, std::string>;

inline std::set<Key> statement_deps(const analysis::UnitAnalysis& a, const ast::FunctionDef& fn) {
  std::set<Key> out;
  const auto* fa = a.function(&fn);
  if (!fa) return out;
  for (const auto& d : analysis::classify_dependences(fa->cfg, fa->dfg)) {
    if (d.kind == analysis::DepKind::RAR) continue;
    const auto& b1 = fa->cfg.blocks[d.from];
    const auto& b2 = fa->cfg.blocks[d.to];
    if (b1.scope != 0 || b2.scope != 0 || !b1.stmt || !b2.stmt) continue;
    if (b1.kind != analysis::BlockKind::Statement || b2.kind != analysis::BlockKind::Statement) continue;
    out.insert({b1.stmt->id, b2.stmt->id, d.kind, a.pts.location(d.location).name});
  }
  return out;
}

inline const ast::FunctionDef* same_function(const ast::SourceUnit& u, ast::NodeId id) {
  for (const auto& c : u.contracts)
    for (const auto* fn : c->functions())
      if (fn->id == id) return fn;
  return nullptr;
}

/// Statements (by id) that read one of `temps` by name.
inline std::set<ast::NodeId> temp_readers(const ast::FunctionDef& fn,
                                          const std::set<std::string>& temps) {
  std::set<ast::NodeId> out;
  ast::walk_stmt(*fn.body, [&](const ast::Stmt& s) {
    ast::direct_exprs(s, [&](const ast::Expr& e) {
      ast::walk_expr(e, [&](const ast::Expr& x) {
        if (x.kind == ast::ExprKind::Identifier &&
            temps.count(static_cast<const ast::Identifier&>(x).name))
          out.insert(s.id);
        return true;
      });
    });
  });
  return out;
}

}  // namespace detail

/// `temps` maps each temporary name to the variable it snapshots.
inline Preservation check_preservation(const analysis::UnitAnalysis& before,
                                       const analysis::UnitAnalysis& after,
                                       const detect::Finding& finding,
                                       const std::vector<std::pair<std::string, std::string>>& temps) {
  Preservation r;
  const ast::FunctionDef* f0 = finding.site.fn;
  const ast::FunctionDef* f1 = detail::same_function(after.unit, f0->id);
  if (!f1) {
    r.broken.push_back("patched function missing");
    return r;
  }
  std::set<std::string> temp_names, sources;
  for (const auto& [t, src] : temps) {
    temp_names.insert(t);
    sources.insert(src);
  }
  auto readers = detail::temp_readers(*f1, temp_names);
  auto old_deps = detail::statement_deps(before, *f0);
  auto new_deps = detail::statement_deps(after, *f1);
  for (const auto& d : old_deps) {
    ++r.checked;
    if (new_deps.count(d)) continue;
    auto [s1, s2, kind, loc] = d;
    ast::NodeId reader = kind == analysis::DepKind::RAW ? s2 : s1;
    if (kind != analysis::DepKind::WAW && sources.count(loc) && readers.count(reader)) {
      ++r.via_temp;
      continue;
    }
    r.broken.push_back(std::string(analysis::to_string(kind)) + " on " + loc + " between " +
                       std::to_string(ast::raw(s1)) + " and " + std::to_string(ast::raw(s2)));
  }
  const auto* fa = after.function(f1);
  int site = -1;
  if (fa) {
    for (const auto& b : fa->cfg.blocks)
      if (b.stmt && b.stmt->id == finding.site.stmt->id && b.scope == 0 &&
          b.kind == analysis::BlockKind::Statement)
        site = b.id;
    if (site >= 0)
      r.writes_after_call =
          static_cast<int>(detect::storage_writes_after(fa->cfg, fa->dfg, site, after.pts).size());
    else
      r.broken.push_back("call statement missing");
  }
  return r;
}

}  // namespace solfix::testing
