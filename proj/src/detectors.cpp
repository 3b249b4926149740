#include "solfix/detectors.hpp"

#include <algorithm>
#include <map>

#include "solfix/ast_walk.hpp"
#include "solfix/printer.hpp"

namespace solfix::detect {

using namespace ast;
using analysis::BlockKind;
using analysis::Cfg;
using analysis::Dfg;
using analysis::LocId;
using analysis::UnitAnalysis;

const char* to_string(VulnClass c) {
  switch (c) {
    case VulnClass::UnhandledException: return "UnhandledException";
    case VulnClass::Reentrancy: return "Reentrancy";
    case VulnClass::MissingInputValidation: return "MissingInputValidation";
    case VulnClass::LockedEther: return "LockedEther";
  }
  return "Reentrancy";
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Syntactic: return "syntactic";
    case Strategy::Dataflow: return "dataflow";
    case Strategy::Semantic: return "semantic";
  }
  return "syntactic";
}

const char* to_string(Scope s) {
  switch (s) {
    case Scope::Statement: return "statement";
    case Scope::Function: return "function";
    case Scope::Contract: return "contract";
  }
  return "statement";
}

const char* to_string(UnfixableReason r) {
  switch (r) {
    case UnfixableReason::ExternalCallControlsWrite: return "external-call-controls-write";
    case UnfixableReason::TimestampDependentWrite: return "timestamp-dependent-write";
    case UnfixableReason::NonAddressParameter: return "non-address-parameter";
    case UnfixableReason::LibraryContract: return "library-contract";
    case UnfixableReason::ReturnValueHandled: return "return-value-handled";
  }
  return "";
}

std::optional<VulnClass> parse_class(const std::string& name) {
  for (VulnClass c : kAllClasses) {
    std::string n = to_string(c);
    std::string lower;
    for (char ch : n) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == n || name == lower) return c;
  }
  if (name == "missing-input-validation") return VulnClass::MissingInputValidation;
  if (name == "locked-ether") return VulnClass::LockedEther;
  if (name == "unhandled-exception") return VulnClass::UnhandledException;
  return std::nullopt;
}

std::string Finding::id() const {
  return std::string(to_string(cls)) + ":" + site.contract + ":" + site.function + "#" +
         std::to_string(site.ordinal);
}

ResultFlow result_flow(const Stmt& s, const FunctionCall& call) {
  ResultFlow f;
  if (s.kind == StmtKind::Expression) {
    const Expr* e = strip_parens(static_cast<const ExprStmt&>(s).expr.get());
    if (e == &call) {
      f.kind = ResultFlow::Bare;
    } else if (e && e->kind == ExprKind::Assign) {
      const auto& as = static_cast<const Assignment&>(*e);
      if (as.op == "=" && strip_parens(as.rhs.get()) == &call) {
        f.kind = ResultFlow::Assigned;
        f.target = as.lhs.get();
      }
    }
  } else if (s.kind == StmtKind::VarDecl) {
    const auto& v = static_cast<const VarDeclStmt&>(s);
    if (strip_parens(v.init.get()) == &call) {
      f.kind = ResultFlow::Local;
      f.local = v.decls.empty() ? nullptr : v.decls[0].get();
    }
  }
  return f;
}

namespace {

bool is_comparison(const std::string& op) {
  return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

/// `address(p)`, `uint(p)` and parentheses are transparent.
const Expr* strip_casts(const Expr* e) {
  e = strip_parens(e);
  while (e && e->kind == ExprKind::Call) {
    const auto& c = static_cast<const FunctionCall&>(*e);
    const Expr* callee = strip_parens(c.callee.get());
    if (!callee || callee->kind != ExprKind::ElementaryType || c.args.size() != 1) break;
    e = strip_parens(c.args[0].get());
  }
  return e;
}

bool is_var(const Expr* e, const VarDecl* v, const sema::Program& p) {
  return e && e->kind == ExprKind::Identifier && p.var_of(*e) == v;
}

bool compares(const Expr& cond, const VarDecl* v, const sema::Program& p) {
  bool found = false;
  walk_expr(cond, [&](const Expr& e) {
    if (found) return false;
    if (e.kind == ExprKind::Binary) {
      const auto& b = static_cast<const BinaryOp&>(e);
      if (is_comparison(b.op) &&
          (is_var(strip_casts(b.lhs.get()), v, p) || is_var(strip_casts(b.rhs.get()), v, p)))
        found = true;
    }
    return !found;
  });
  return found;
}

bool mentions(const Expr& root, const VarDecl* v, const sema::Program& p) {
  bool found = false;
  walk_expr(root, [&](const Expr& e) {
    if (e.kind == ExprKind::Identifier && p.var_of(e) == v) found = true;
    return !found;
  });
  return found;
}

/// `require(...)`/`assert(...)` call of an expression statement.
const FunctionCall* guard_call(const Stmt& s) {
  if (s.kind != StmtKind::Expression) return nullptr;
  const Expr* e = strip_parens(static_cast<const ExprStmt&>(s).expr.get());
  if (!e || e->kind != ExprKind::Call) return nullptr;
  const auto& c = static_cast<const FunctionCall&>(*e);
  const Expr* callee = strip_parens(c.callee.get());
  if (!callee || callee->kind != ExprKind::Identifier || c.args.empty()) return nullptr;
  const auto& name = static_cast<const Identifier&>(*callee).name;
  return name == "require" || name == "assert" ? &c : nullptr;
}

bool branch_reverts(const Stmt* s) {
  if (!s) return false;
  if (s->kind == StmtKind::Block) {
    const auto& b = static_cast<const Block&>(*s);
    return !b.statements.empty() && analysis::always_reverts(*b.statements.front());
  }
  return analysis::always_reverts(*s);
}

enum class Verdict { Validated, Used, Unknown };

Verdict scan_validation(const Block& body, const VarDecl* v, const sema::Program& p,
                        bool stop_at_placeholder) {
  Verdict out = Verdict::Unknown;
  bool stopped = false;
  walk_stmt(body, [&](const Stmt& s) {
    if (out != Verdict::Unknown || stopped) return;
    if (s.kind == StmtKind::Placeholder && stop_at_placeholder) {
      stopped = true;
      return;
    }
    if (const FunctionCall* g = guard_call(s)) {
      if (compares(*g->args[0], v, p)) {
        out = Verdict::Validated;
        return;
      }
    } else if (s.kind == StmtKind::If) {
      const auto& x = static_cast<const IfStmt&>(s);
      if (branch_reverts(x.then.get()) && compares(*x.cond, v, p)) {
        out = Verdict::Validated;
        return;
      }
    }
    direct_exprs(s, [&](const Expr& e) {
      if (out == Verdict::Unknown && mentions(e, v, p)) out = Verdict::Used;
    });
  });
  return out;
}

bool address_like(const sema::TypeRef& t) {
  return t.is_address() || t.kind == sema::TypeRef::Kind::Contract;
}

Site base_site(const UnitAnalysis& a, const ContractDef& c, const FunctionDef* fn) {
  Site s;
  s.contract = c.name;
  s.fn = fn;
  if (fn) s.function = fn->signature();
  (void)a;
  return s;
}

void locate(Site& s, const UnitAnalysis& a, NodeId node, Span span) {
  s.node = node;
  s.span = span;
  s.line = span.synthetic ? 0 : line_of(a.unit.source, span.begin);
}

bool is_storage_write_block(const Dfg& dfg, int b, const analysis::PointsToMap& pts) {
  for (LocId l : dfg.facts[b].writes)
    if (pts.location(l).is_storage()) return true;
  return false;
}

bool has_direct_external_call(const analysis::BlockFacts& f) {
  for (const auto& cs : f.calls)
    if (cs.info.is_external() && !cs.info.option_setter) return true;
  return false;
}

const FunctionCall* first_external_call(const analysis::BlockFacts& f) {
  for (const auto& cs : f.calls)
    if (cs.info.is_external() && !cs.info.option_setter) return cs.call;
  return nullptr;
}

/// Call-site blocks of the function body in block order.
std::vector<int> reentrancy_sites(const Cfg& cfg, const Dfg& dfg) {
  std::vector<int> out;
  for (const auto& b : cfg.blocks) {
    if (b.scope != 0 || b.kind == BlockKind::Entry || b.kind == BlockKind::Exit) continue;
    if (has_direct_external_call(dfg.facts[b.id])) out.push_back(b.id);
  }
  return out;
}

/// Storage-writing blocks strictly reachable from `site`.
std::vector<int> writes_after(const Cfg& cfg, const Dfg& dfg, int site,
                              const analysis::PointsToMap& pts) {
  std::vector<int> out;
  const auto& reach = cfg.reachable_from(site);
  for (const auto& b : cfg.blocks)
    if (reach[b.id] && is_storage_write_block(dfg, b.id, pts)) out.push_back(b.id);
  return out;
}

bool controlled_by_call(const Cfg& cfg, const Dfg& dfg, int site, int write) {
  std::set<int> tainted = dfg.forward_closure(site);
  tainted.insert(site);
  for (int c : cfg.blocks[write].conditions)
    if (tainted.count(c)) return true;
  return false;
}

bool state_assignment(const Stmt& s, const sema::Program& p) {
  bool found = false;
  auto state_root = [&](const Expr* lhs) {
    if (!lhs) return false;
    const VarDecl* v = p.root_var(*lhs);
    const sema::VarInfo* vi = v ? p.info(v) : nullptr;
    return vi && vi->role == sema::VarRole::State;
  };
  direct_exprs(s, [&](const Expr& root) {
    walk_expr(root, [&](const Expr& e) {
      if (e.kind == ExprKind::Assign) {
        const auto& x = static_cast<const Assignment&>(e);
        const Expr* lhs = strip_parens(x.lhs.get());
        if (lhs && lhs->kind == ExprKind::Tuple) {
          for (const auto& el : static_cast<const TupleExpr&>(*lhs).elements)
            if (state_root(el.get())) found = true;
        } else if (state_root(lhs)) {
          found = true;
        }
      } else if (e.kind == ExprKind::Unary) {
        const auto& u = static_cast<const UnaryOp&>(e);
        if ((u.op == "++" || u.op == "--" || u.op == "delete") && state_root(u.operand.get()))
          found = true;
      }
      return !found;
    });
  });
  return found;
}

bool guarded_by_modifier(const FunctionDef& fn, const sema::Program& p);

bool mutex_prefix(const Block& body, const sema::Program& p) {
  if (body.statements.size() < 2) return false;
  const FunctionCall* g = guard_call(*body.statements[0]);
  if (!g) return false;
  const Expr* cond = strip_parens(g->args[0].get());
  if (!cond || cond->kind != ExprKind::Unary) return false;
  const auto& u = static_cast<const UnaryOp&>(*cond);
  const Expr* flag = strip_parens(u.operand.get());
  if (u.op != "!" || !flag || flag->kind != ExprKind::Identifier) return false;
  const VarDecl* v = p.var_of(*flag);
  const sema::VarInfo* vi = v ? p.info(v) : nullptr;
  if (!vi || vi->role != sema::VarRole::State) return false;
  const Stmt& set = *body.statements[1];
  if (set.kind != StmtKind::Expression) return false;
  const Expr* e = strip_parens(static_cast<const ExprStmt&>(set).expr.get());
  if (!e || e->kind != ExprKind::Assign) return false;
  const auto& as = static_cast<const Assignment&>(*e);
  const Expr* rhs = strip_parens(as.rhs.get());
  return as.op == "=" && is_var(strip_parens(as.lhs.get()), v, p) && rhs &&
         rhs->kind == ExprKind::Literal && static_cast<const Literal&>(*rhs).text == "true";
}

bool guarded_by_modifier(const FunctionDef& fn, const sema::Program& p) {
  const ContractDef* owner = p.owner(fn);
  const sema::ContractModel* model = owner ? p.model(*owner) : nullptr;
  if (!model) return false;
  for (const auto& inv : fn.modifiers) {
    const ModifierDef* md = model->modifier(inv.name);
    if (md && md->body && mutex_prefix(*md->body, p)) return true;
  }
  return false;
}

}  // namespace

std::vector<int> storage_writes_after(const Cfg& cfg, const Dfg& dfg, int site,
                                      const analysis::PointsToMap& pts) {
  return writes_after(cfg, dfg, site, pts);
}

bool is_mutex_guarded(const FunctionDef& fn, const sema::Program& program) {
  if (fn.body && mutex_prefix(*fn.body, program)) return true;
  return guarded_by_modifier(fn, program);
}

bool parameter_validated(const FunctionDef& fn, std::size_t index, const sema::Program& p) {
  if (index >= fn.params.size() || !fn.body) return false;
  const VarDecl* v = fn.params[index].get();
  const ContractDef* owner = p.owner(fn);
  const sema::ContractModel* model = owner ? p.model(*owner) : nullptr;
  if (model) {
    for (const auto& inv : fn.modifiers) {
      const ModifierDef* md = model->modifier(inv.name);
      if (!md || !md->body) continue;
      for (std::size_t k = 0; k < inv.args.size() && k < md->params.size(); ++k) {
        if (!is_var(strip_parens(inv.args[k].get()), v, p)) continue;
        if (scan_validation(*md->body, md->params[k].get(), p, true) == Verdict::Validated)
          return true;
      }
    }
  }
  return scan_validation(*fn.body, v, p, false) == Verdict::Validated;
}

std::vector<Vote> detect_reentrancy(const UnitAnalysis& a) {
  std::vector<Vote> out;
  const auto& p = a.program;
  for (const auto& c : a.unit.contracts) {
    if (c->kind == ContractKind::Interface) continue;
    for (const auto* fn : c->functions()) {
      const auto* fa = a.function(fn);
      if (!fa || fn->is_constructor() || fn->is_read_only()) continue;
      const Cfg& cfg = fa->cfg;
      const Dfg& dfg = fa->dfg;
      bool mutex = is_mutex_guarded(*fn, p);
      auto sites = reentrancy_sites(cfg, dfg);
      for (std::size_t i = 0; i < sites.size(); ++i) {
        int sb = sites[i];
        const auto& block = cfg.blocks[sb];
        Site site = base_site(a, *c, fn);
        site.ordinal = static_cast<int>(i);
        site.stmt = block.stmt;
        site.call = first_external_call(dfg.facts[sb]);
        locate(site, a, block.stmt->id, block.stmt->span);
        site.description = site.call ? print_expr(*site.call) : "";

        // Lexically later statement assigning a state variable.
        std::uint32_t after = block.expr ? block.expr->span.end : block.stmt->span.end;
        bool syntactic = false;
        walk_stmt(*fn->body, [&](const Stmt& s) {
          if (syntactic || s.kind == StmtKind::Block || s.span.begin < after) return;
          if (state_assignment(s, p)) syntactic = true;
        });
        if (syntactic) out.push_back({Strategy::Syntactic, VulnClass::Reentrancy, site, ""});

        if (mutex) continue;
        auto writes = writes_after(cfg, dfg, sb, a.pts);
        if (writes.empty()) continue;
        out.push_back({Strategy::Dataflow, VulnClass::Reentrancy, site, ""});
        bool uncontrolled = std::any_of(writes.begin(), writes.end(), [&](int w) {
          return !controlled_by_call(cfg, dfg, sb, w);
        });
        if (uncontrolled) out.push_back({Strategy::Semantic, VulnClass::Reentrancy, site, ""});
      }
    }
  }
  return out;
}

std::vector<Vote> detect_missing_input_validation(const UnitAnalysis& a) {
  std::vector<Vote> out;
  const auto& p = a.program;
  for (const auto& c : a.unit.contracts) {
    if (c->kind == ContractKind::Interface) continue;
    for (const auto* fn : c->functions()) {
      if (!fn->body || !fn->is_entry_point() || fn->is_read_only()) continue;
      for (std::size_t i = 0; i < fn->params.size(); ++i) {
        const VarDecl* v = fn->params[i].get();
        if (v->name.empty() || parameter_validated(*fn, i, p)) continue;
        Site site = base_site(a, *c, fn);
        site.ordinal = static_cast<int>(i);
        site.param = v;
        site.description = v->name;
        locate(site, a, v->id, v->span);
        out.push_back({Strategy::Dataflow, VulnClass::MissingInputValidation, site, ""});
      }
    }
  }
  return out;
}

std::vector<Vote> detect_locked_ether(const UnitAnalysis& a) {
  std::vector<Vote> out;
  const auto& p = a.program;
  std::set<std::string> bases;
  for (const auto& c : a.unit.contracts)
    for (const auto& b : c->bases) bases.insert(b.name);
  for (const auto& c : a.unit.contracts) {
    if (c->kind == ContractKind::Interface || bases.count(c->name)) continue;
    const sema::ContractModel* model = p.model(*c);
    if (!model || !model->has_payable_entry()) continue;
    Site site = base_site(a, *c, nullptr);
    site.description = c->name;
    locate(site, a, c->id, c->span);

    bool token = false;
    for (const auto* fn : model->functions()) {
      if (!fn->body) continue;
      walk_stmt_exprs(*fn->body, [&](const Expr& e) {
        if (e.kind == ExprKind::Member) {
          const auto& m = static_cast<const MemberAccess&>(e).member;
          if (m == "send" || m == "transfer" || m == "call" || m == "delegatecall" ||
              m == "callcode")
            token = true;
        } else if (e.kind == ExprKind::Identifier) {
          const auto& n = static_cast<const Identifier&>(e).name;
          if (n == "selfdestruct" || n == "suicide") token = true;
        }
        return !token;
      });
    }
    if (!token) out.push_back({Strategy::Syntactic, VulnClass::LockedEther, site, ""});

    bool any_transfer = false;
    bool entry_transfer = false;
    for (const auto* fn : model->functions()) {
      const analysis::MethodSummary* s = a.summaries.of(fn);
      if (!s || !s->ether_transfer) continue;
      any_transfer = true;
      if (fn->is_entry_point() && !fn->is_constructor()) entry_transfer = true;
    }
    if (!any_transfer) out.push_back({Strategy::Dataflow, VulnClass::LockedEther, site, ""});
    // Only exits reachable from an entry point count; delegatecall never does.
    if (!entry_transfer) out.push_back({Strategy::Semantic, VulnClass::LockedEther, site, ""});
  }
  return out;
}

namespace {

bool is_unhandled_site(const sema::CallInfo& ci) {
  if (ci.option_setter) return false;
  return ci.kind == sema::CallKind::EtherSend || ci.kind == sema::CallKind::EtherCallValue ||
         (ci.kind == sema::CallKind::ExternalContract && ci.low_level);
}

struct UnhandledSite {
  const Stmt* stmt;
  const FunctionCall* call;
};

std::vector<UnhandledSite> unhandled_sites(const FunctionDef& fn, const sema::Program& p) {
  std::vector<UnhandledSite> out;
  walk_stmt(*fn.body, [&](const Stmt& s) {
    direct_exprs(s, [&](const Expr& root) {
      walk_expr(root, [&](const Expr& e) {
        if (e.kind == ExprKind::Call) {
          const auto& c = static_cast<const FunctionCall&>(e);
          if (is_unhandled_site(p.classify(c))) out.push_back({&s, &c});
        }
        return true;
      });
    });
  });
  return out;
}

bool result_used(const ResultFlow& f, int block, const UnitAnalysis& a, const Dfg& dfg) {
  switch (f.kind) {
    case ResultFlow::Bare: return false;
    case ResultFlow::Consumed: return true;
    case ResultFlow::Local: {
      if (!f.local || block < 0) return false;
      return dfg.has_use(block, a.pts.self(f.local));
    }
    case ResultFlow::Assigned: {
      const VarDecl* v = a.program.root_var(*f.target);
      if (!v || block < 0) return false;
      for (LocId l : a.pts.points_to(v))
        if (dfg.has_use(block, l)) return true;
      return false;
    }
  }
  return true;
}

bool inside_guard(const Stmt& s, const FunctionCall& call) {
  auto contains = [&](const Expr& root) {
    bool found = false;
    walk_expr(root, [&](const Expr& e) {
      if (&e == &call) found = true;
      return !found;
    });
    return found;
  };
  if (const FunctionCall* g = guard_call(s))
    for (const auto& arg : g->args)
      if (contains(*arg)) return true;
  if (s.kind == StmtKind::If) return contains(*static_cast<const IfStmt&>(s).cond);
  return false;
}

}  // namespace

std::vector<Vote> detect_unhandled_exception(const UnitAnalysis& a) {
  std::vector<Vote> out;
  for (const auto& c : a.unit.contracts) {
    if (c->kind == ContractKind::Interface) continue;
    for (const auto* fn : c->functions()) {
      const auto* fa = a.function(fn);
      if (!fa) continue;
      auto sites = unhandled_sites(*fn, a.program);
      for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& [stmt, call] = sites[i];
        Site site = base_site(a, *c, fn);
        site.ordinal = static_cast<int>(i);
        site.stmt = stmt;
        site.call = call;
        site.description = print_expr(*call);
        locate(site, a, call->id, call->span);
        ResultFlow flow = result_flow(*stmt, *call);
        int block = fa->cfg.block_of(stmt, 0);
        if (flow.kind == ResultFlow::Bare)
          out.push_back({Strategy::Syntactic, VulnClass::UnhandledException, site, ""});
        if (!result_used(flow, block, a, fa->dfg)) {
          out.push_back({Strategy::Dataflow, VulnClass::UnhandledException, site, ""});
          if (!inside_guard(*stmt, *call))
            out.push_back({Strategy::Semantic, VulnClass::UnhandledException, site, ""});
        }
      }
    }
  }
  return out;
}

std::vector<Finding> ensemble(const std::vector<Vote>& votes, const DetectConfig& config) {
  std::map<std::string, Finding> groups;
  for (const auto& v : votes) {
    if (config.disabled.count(v.detector)) continue;
    Finding f;
    f.cls = v.cls;
    f.site = v.site;
    auto [it, inserted] = groups.try_emplace(f.id(), f);
    it->second.votes.insert(v.detector);
  }
  std::vector<Finding> out;
  for (auto& [id, f] : groups) {
    if (static_cast<int>(f.votes.size()) < std::max(1, config.threshold(f.cls))) continue;
    switch (f.cls) {
      case VulnClass::UnhandledException: f.scope = Scope::Statement; break;
      case VulnClass::Reentrancy:
      case VulnClass::MissingInputValidation: f.scope = Scope::Function; break;
      case VulnClass::LockedEther: f.scope = Scope::Contract; break;
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Finding& x, const Finding& y) {
    return std::tuple(x.site.span.begin, x.site.span.end, static_cast<int>(x.cls), x.id()) <
           std::tuple(y.site.span.begin, y.site.span.end, static_cast<int>(y.cls), y.id());
  });
  return out;
}

namespace {

std::optional<UnfixableReason> reentrancy_reason(const Finding& f, const UnitAnalysis& a) {
  const auto* fa = a.function(f.site.fn);
  if (!fa || !f.site.stmt) return std::nullopt;
  const Cfg& cfg = fa->cfg;
  const Dfg& dfg = fa->dfg;
  int site = cfg.block_of(f.site.stmt, 0);
  if (site < 0) return std::nullopt;
  auto writes = writes_after(cfg, dfg, site, a.pts);
  for (int w : writes)
    if (controlled_by_call(cfg, dfg, site, w)) return UnfixableReason::ExternalCallControlsWrite;
  std::set<int> tainted;
  for (const auto& b : cfg.blocks) {
    if (!dfg.facts[b.id].reads.count(a.pts.timestamp())) continue;
    tainted.insert(b.id);
    auto more = dfg.forward_closure(b.id);
    tainted.insert(more.begin(), more.end());
  }
  for (int w : writes)
    if (tainted.count(w)) return UnfixableReason::TimestampDependentWrite;
  return std::nullopt;
}

/// A state variable receiving the result is read somewhere in the contract.
bool state_result_read(const Finding& f, const UnitAnalysis& a) {
  if (!f.site.stmt || !f.site.call) return false;
  ResultFlow flow = result_flow(*f.site.stmt, *f.site.call);
  const VarDecl* v = nullptr;
  if (flow.kind == ResultFlow::Assigned) v = a.program.root_var(*flow.target);
  const sema::VarInfo* vi = v ? a.program.info(v) : nullptr;
  if (!vi || vi->role != sema::VarRole::State) return false;
  const ContractDef* c = a.unit.find_contract(f.site.contract);
  const sema::ContractModel* model = c ? a.program.model(*c) : nullptr;
  if (!model) return false;
  for (const auto* fn : model->functions()) {
    if (!fn->body) continue;
    bool read = false;
    walk_stmt(*fn->body, [&](const Stmt& s) {
      direct_exprs(s, [&](const Expr& root) {
        const Expr* skip = nullptr;
        const Expr* top = strip_parens(&root);
        if (top && top->kind == ExprKind::Assign &&
            static_cast<const Assignment&>(*top).op == "=")
          skip = strip_parens(static_cast<const Assignment&>(*top).lhs.get());
        walk_expr(root, [&](const Expr& e) {
          if (&e == skip) return false;
          if (e.kind == ExprKind::Identifier && a.program.var_of(e) == v) read = true;
          return !read;
        });
      });
    });
    if (read) return true;
  }
  return false;
}

}  // namespace

void post_process(std::vector<Finding>& findings, const UnitAnalysis& a) {
  for (auto& f : findings) {
    std::optional<UnfixableReason> reason;
    switch (f.cls) {
      case VulnClass::Reentrancy: reason = reentrancy_reason(f, a); break;
      case VulnClass::MissingInputValidation:
        if (!f.site.param || !address_like(a.program.type_of(*f.site.param)))
          reason = UnfixableReason::NonAddressParameter;
        break;
      case VulnClass::LockedEther: {
        const ContractDef* c = a.unit.find_contract(f.site.contract);
        const sema::ContractModel* model = c ? a.program.model(*c) : nullptr;
        if (!c || c->kind == ContractKind::Library || !model || !model->has_payable_entry())
          reason = UnfixableReason::LibraryContract;
        break;
      }
      case VulnClass::UnhandledException:
        if (state_result_read(f, a)) reason = UnfixableReason::ReturnValueHandled;
        break;
    }
    f.fixable = !reason;
    f.reason = reason;
  }
}

std::vector<Finding> detect(const UnitAnalysis& a, const DetectConfig& config) {
  std::vector<Vote> votes;
  for (auto&& part : {detect_unhandled_exception(a), detect_reentrancy(a),
                      detect_missing_input_validation(a), detect_locked_ether(a)})
    votes.insert(votes.end(), part.begin(), part.end());
  auto findings = ensemble(votes, config);
  post_process(findings, a);
  return findings;
}

}  // namespace solfix::detect
