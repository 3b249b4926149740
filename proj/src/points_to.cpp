#include "solfix/points_to.hpp"

#include <algorithm>
#include <sstream>

#include "solfix/ast_walk.hpp"

namespace solfix::analysis {

using namespace ast;

LocId PointsToMap::self(const VarDecl* decl) const {
  auto it = self_.find(decl);
  return it == self_.end() ? -1 : it->second;
}

const std::set<LocId>& PointsToMap::points_to(const VarDecl* decl) const {
  static const std::set<LocId> kEmpty;
  auto it = pts_.find(decl);
  return it == pts_.end() ? kEmpty : it->second;
}

bool PointsToMap::is_reference(const VarDecl* decl) const {
  const auto& p = points_to(decl);
  LocId s = self(decl);
  return !(p.size() == 1 && *p.begin() == s);
}

std::string PointsToMap::dump() const {
  std::vector<std::string> lines;
  for (const auto& [decl, set] : pts_) {
    std::string line = decl->name + "@" + std::to_string(raw(decl->id)) + " -> {";
    bool first = true;
    for (LocId l : set) {
      line += (first ? "" : ", ") + locations_[l].name + ":" + to_string(locations_[l].location);
      first = false;
    }
    lines.push_back(line + "}");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

struct Constraint {
  const VarDecl* target;
  const VarDecl* source;
  NodeId site;
};

class ConstraintCollector {
public:
  explicit ConstraintCollector(const sema::Program& p) : p_(p) {}

  std::vector<Constraint> run() {
    for (const auto& c : p_.unit().contracts) {
      for (const auto& m : c->members) {
        if (m->kind == MemberKind::Function) {
          const auto& f = static_cast<const FunctionDef&>(*m);
          for (const auto& inv : f.modifiers)
            for (const auto& a : inv.args) expr(*a);
          if (f.body) stmt(*f.body);
        } else if (m->kind == MemberKind::Modifier) {
          const auto& md = static_cast<const ModifierDef&>(*m);
          if (md.body) stmt(*md.body);
        }
      }
    }
    return std::move(out_);
  }

private:
  void stmt(const Stmt& s) {
    walk_stmt(s, [&](const Stmt& st) {
      if (st.kind == StmtKind::VarDecl) {
        const auto& v = static_cast<const VarDeclStmt&>(st);
        if (!v.tuple && v.decls.size() == 1 && v.decls[0] && v.init)
          assign(v.decls[0].get(), *v.init, st.id);
      }
      direct_exprs(st, [&](const Expr& e) { expr(e); });
    });
  }

  void expr(const Expr& root) {
    walk_expr(root, [&](const Expr& e) {
      if (e.kind == ExprKind::Assign) {
        const auto& a = static_cast<const Assignment&>(e);
        if (a.op == "=")
          if (const VarDecl* t = p_.var_of(*a.lhs)) assign(t, *a.rhs, e.id);
      } else if (e.kind == ExprKind::Call) {
        const auto& c = static_cast<const FunctionCall&>(e);
        sema::CallInfo ci = p_.classify(c);
        if (ci.callee && ci.kind == sema::CallKind::Internal && c.arg_names.empty()) {
          // `using for` calls bind the receiver to the first parameter.
          std::size_t shift = ci.callee->params.size() == c.args.size() + 1 ? 1 : 0;
          if (shift && ci.receiver) assign(ci.callee->params[0].get(), *ci.receiver, e.id);
          for (std::size_t i = 0; i < c.args.size() && i + shift < ci.callee->params.size(); ++i)
            assign(ci.callee->params[i + shift].get(), *c.args[i], e.id);
        }
      }
      return true;
    });
  }

  void assign(const VarDecl* target, const Expr& rhs, NodeId site) {
    const sema::VarInfo* ti = p_.info(target);
    if (!ti || !ti->composite || ti->role == sema::VarRole::State) return;
    const Expr* r = strip_parens(&rhs);
    if (!r || (r->kind != ExprKind::Identifier && r->kind != ExprKind::Member &&
               r->kind != ExprKind::Index))
      return;
    const VarDecl* source = p_.root_var(*r);
    if (!source) return;
    DataLocation from = p_.location_of(*r);
    bool storage_ref = ti->location == DataLocation::Storage && from == DataLocation::Storage;
    bool memory_ref = ti->location == DataLocation::Memory && from == DataLocation::Memory;
    if (storage_ref || memory_ref) out_.push_back({target, source, site});
  }

  const sema::Program& p_;
  std::vector<Constraint> out_;
};

}  // namespace

PointsToMap pointer_analysis(const sema::Program& program) {
  PointsToMap m;
  std::vector<const sema::VarInfo*> vars;
  for (const auto& [decl, info] : program.vars()) vars.push_back(&info);
  std::sort(vars.begin(), vars.end(), [](const auto* a, const auto* b) {
    return raw(a->decl->id) < raw(b->decl->id);
  });
  for (const auto* vi : vars) {
    bool pure_reference = vi->role != sema::VarRole::State && vi->composite &&
                          vi->location == DataLocation::Storage;
    auto& set = m.pts_[vi->decl];
    if (pure_reference) continue;
    AbstractLocation loc;
    loc.decl = vi->decl;
    loc.location = vi->role == sema::VarRole::State ? DataLocation::Storage : vi->location;
    loc.name = vi->decl->name;
    LocId id = static_cast<LocId>(m.locations_.size());
    m.locations_.push_back(loc);
    m.self_[vi->decl] = id;
    set.insert(id);
  }
  AbstractLocation ts;
  ts.name = "block.timestamp";
  m.timestamp_ = static_cast<LocId>(m.locations_.size());
  m.locations_.push_back(ts);

  auto constraints = ConstraintCollector(program).run();
  for (const auto& c : constraints) m.edges_.push_back({c.target, c.source, c.site});
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : constraints) {
      const std::set<LocId> src = m.pts_[c.source];
      auto& dst = m.pts_[c.target];
      std::size_t before = dst.size();
      dst.insert(src.begin(), src.end());
      changed |= dst.size() != before;
    }
  }
  return m;
}

}  // namespace solfix::analysis
