#include "solfix/dataflow.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>

#include "solfix/ast_walk.hpp"

namespace solfix::analysis {

using namespace ast;

const char* to_string(AccessMode mode) {
  switch (mode) {
    case AccessMode::Create: return "create";
    case AccessMode::Read: return "read";
    case AccessMode::Write: return "write";
    case AccessMode::Delete: return "delete";
  }
  return "read";
}

const char* to_string(DepKind kind) {
  switch (kind) {
    case DepKind::RAW: return "RAW";
    case DepKind::WAR: return "WAR";
    case DepKind::WAW: return "WAW";
    case DepKind::RAR: return "RAR";
  }
  return "RAW";
}

namespace {

class Collector {
public:
  Collector(const sema::Program& p, const PointsToMap& pts, const Summaries* summaries, int block,
            BlockFacts& out)
      : p_(p), pts_(pts), summaries_(summaries), block_(block), out_(out) {}

  void read(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Identifier: {
        const auto& id = static_cast<const Identifier&>(e);
        if (const VarDecl* v = p_.var_of(e)) {
          for (LocId l : pts_.points_to(v)) event(l, AccessMode::Read, false);
        } else if (id.name == "now") {
          event(pts_.timestamp(), AccessMode::Read, false);
        }
        return;
      }
      case ExprKind::Literal:
      case ExprKind::ElementaryType:
      case ExprKind::New:
        return;
      case ExprKind::Member: {
        const auto& m = static_cast<const MemberAccess&>(e);
        const Expr* base = strip_parens(m.base.get());
        if (base && base->kind == ExprKind::Identifier &&
            static_cast<const Identifier&>(*base).name == "block" && m.member == "timestamp" &&
            !p_.var_of(*base)) {
          event(pts_.timestamp(), AccessMode::Read, false);
          return;
        }
        read(*m.base);
        return;
      }
      case ExprKind::Index: {
        const auto& x = static_cast<const IndexAccess&>(e);
        read(*x.base);
        if (x.index) read(*x.index);
        return;
      }
      case ExprKind::Call: call(static_cast<const FunctionCall&>(e)); return;
      case ExprKind::CallOptions: {
        const auto& o = static_cast<const CallOptions&>(e);
        read(*o.callee);
        for (const auto& v : o.values) read(*v);
        return;
      }
      case ExprKind::Unary: {
        const auto& u = static_cast<const UnaryOp&>(e);
        if (u.op == "++" || u.op == "--")
          write(*u.operand, AccessMode::Write, true);
        else if (u.op == "delete")
          write(*u.operand, AccessMode::Delete, false);
        else
          read(*u.operand);
        return;
      }
      case ExprKind::Binary: {
        const auto& b = static_cast<const BinaryOp&>(e);
        read(*b.lhs);
        read(*b.rhs);
        return;
      }
      case ExprKind::Assign: {
        const auto& a = static_cast<const Assignment&>(e);
        read(*a.rhs);
        write(*a.lhs, AccessMode::Write, a.op != "=");
        return;
      }
      case ExprKind::Conditional: {
        const auto& c = static_cast<const Conditional&>(e);
        read(*c.cond);
        read(*c.then);
        read(*c.otherwise);
        return;
      }
      case ExprKind::Tuple:
        for (const auto& x : static_cast<const TupleExpr&>(e).elements)
          if (x) read(*x);
        return;
      case ExprKind::InlineArray:
        for (const auto& x : static_cast<const InlineArray&>(e).elements) read(*x);
        return;
    }
  }

  void write(const Expr& lhs, AccessMode mode, bool also_read) {
    const Expr* s = strip_parens(&lhs);
    if (!s) return;
    if (s->kind == ExprKind::Tuple) {
      for (const auto& x : static_cast<const TupleExpr&>(*s).elements)
        if (x) write(*x, mode, also_read);
      return;
    }
    if (s->kind == ExprKind::Identifier) {
      const VarDecl* v = p_.var_of(*s);
      if (!v) return;
      const auto& set = pts_.points_to(v);
      bool strong = set.size() == 1 && *set.begin() == pts_.self(v);
      for (LocId l : set) {
        if (also_read) event(l, AccessMode::Read, false);
        event(l, mode, strong);
      }
      return;
    }
    if (s->kind == ExprKind::Member || s->kind == ExprKind::Index) {
      // Indices and non-variable bases are evaluated as reads.
      const Expr* cur = s;
      while (cur && (cur->kind == ExprKind::Member || cur->kind == ExprKind::Index)) {
        if (cur->kind == ExprKind::Index) {
          const auto& x = static_cast<const IndexAccess&>(*cur);
          if (x.index) read(*x.index);
          cur = strip_parens(x.base.get());
        } else {
          cur = strip_parens(static_cast<const MemberAccess&>(*cur).base.get());
        }
      }
      const VarDecl* root = cur ? p_.var_of(*cur) : nullptr;
      if (!root) {
        if (cur) read(*cur);
        return;
      }
      for (LocId l : pts_.points_to(root)) {
        if (also_read) event(l, AccessMode::Read, false);
        event(l, mode, false);
      }
      return;
    }
    read(*s);
  }

private:
  void call(const FunctionCall& c) {
    sema::CallInfo ci = p_.classify(c);
    read(*c.callee);
    for (const auto& a : c.args) read(*a);
    if (ci.callee && summaries_) {
      if (const MethodSummary* s = summaries_->of(ci.callee)) {
        for (LocId l : s->state_read) event(l, AccessMode::Read, false);
        for (LocId l : s->state_written) event(l, AccessMode::Write, false);
        if (s->external_call) out_.external_call = true;
        if (s->ether_transfer) out_.ether_transfer = true;
      }
    }
    if ((ci.builtin == "push" || ci.builtin == "pop") && ci.receiver)
      write(*ci.receiver, AccessMode::Write, true);
    if (ci.builtin == "selfdestruct" || ci.builtin == "suicide") out_.ether_transfer = true;
    if (ci.is_external()) out_.external_call = true;
    if (ci.is_ether_transfer()) out_.ether_transfer = true;
    out_.calls.push_back({&c, ci});
  }

  void event(LocId l, AccessMode mode, bool strong) {
    if (l < 0) return;
    out_.events.push_back({block_, l, mode, strong});
    if (mode == AccessMode::Read)
      out_.reads.insert(l);
    else
      out_.writes.insert(l);
  }

  const sema::Program& p_;
  const PointsToMap& pts_;
  const Summaries* summaries_;
  int block_;
  BlockFacts& out_;
};

void create(BlockFacts& out, int block, const PointsToMap& pts, const VarDecl* d) {
  LocId l = pts.self(d);
  if (l < 0) return;
  out.events.push_back({block, l, AccessMode::Create, true});
  out.writes.insert(l);
}

void stmt_facts(const Stmt& s, Collector& c, BlockFacts& out, int block, const PointsToMap& pts) {
  switch (s.kind) {
    case StmtKind::VarDecl: {
      const auto& v = static_cast<const VarDeclStmt&>(s);
      if (v.init) c.read(*v.init);
      for (const auto& d : v.decls)
        if (d) create(out, block, pts, d.get());
      return;
    }
    default:
      direct_exprs(s, [&](const Expr& e) { c.read(e); });
      return;
  }
}

}  // namespace

const MethodSummary* Summaries::of(const FunctionDef* fn) const {
  auto it = map_.find(fn);
  return it == map_.end() ? nullptr : &it->second;
}

Summaries summarize(const sema::Program& program, const PointsToMap& pts) {
  Summaries out;
  for (const auto& c : program.unit().contracts) {
    const sema::ContractModel* model = program.model(*c);
    for (const auto* f : c->functions()) {
      BlockFacts facts;
      Collector col(program, pts, nullptr, 0, facts);
      auto visit = [&](const Stmt& body) {
        walk_stmt(body, [&](const Stmt& s) {
          if (s.kind == StmtKind::Block) return;
          stmt_facts(s, col, facts, 0, pts);
        });
      };
      for (const auto& inv : f->modifiers) {
        for (const auto& a : inv.args) col.read(*a);
        if (const ModifierDef* md = model ? model->modifier(inv.name) : nullptr)
          if (md->body) visit(*md->body);
      }
      if (f->body) visit(*f->body);
      MethodSummary s;
      s.function = f;
      for (LocId l : facts.reads)
        if (pts.location(l).is_storage()) s.state_read.insert(l);
      for (LocId l : facts.writes)
        if (pts.location(l).is_storage()) s.state_written.insert(l);
      s.external_call = facts.external_call;
      s.ether_transfer = facts.ether_transfer;
      for (const auto& cs : facts.calls) {
        if (cs.info.kind == sema::CallKind::Delegatecall) s.delegatecall = true;
        if (cs.info.callee) s.callees.insert(cs.info.callee);
      }
      out.map_[f] = std::move(s);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [f, s] : out.map_) {
      for (const auto* g : s.callees) {
        auto it = out.map_.find(g);
        if (it == out.map_.end() || it->first == f) continue;
        const MethodSummary& gs = it->second;
        auto before = std::tuple(s.state_read.size(), s.state_written.size(), s.external_call,
                                 s.ether_transfer, s.delegatecall);
        s.state_read.insert(gs.state_read.begin(), gs.state_read.end());
        s.state_written.insert(gs.state_written.begin(), gs.state_written.end());
        s.external_call |= gs.external_call;
        s.ether_transfer |= gs.ether_transfer;
        s.delegatecall |= gs.delegatecall;
        changed |= before != std::tuple(s.state_read.size(), s.state_written.size(),
                                        s.external_call, s.ether_transfer, s.delegatecall);
      }
    }
  }
  return out;
}

BlockFacts block_facts(const Cfg& cfg, int block, const sema::Program& program,
                       const PointsToMap& pts, const Summaries* summaries) {
  BlockFacts out;
  Collector col(program, pts, summaries, block, out);
  const CfgBlock& b = cfg.blocks[block];
  switch (b.kind) {
    case BlockKind::Entry:
      for (const auto& d : cfg.function->params) create(out, block, pts, d.get());
      for (const auto& d : cfg.function->returns) create(out, block, pts, d.get());
      for (const auto& mi : cfg.modifiers) {
        for (const auto& [param, arg] : mi.bindings) {
          col.read(*arg);
          create(out, block, pts, param);
        }
      }
      break;
    case BlockKind::Exit: break;
    case BlockKind::Condition:
    case BlockKind::LoopPost:
      if (b.expr) col.read(*b.expr);
      break;
    case BlockKind::Statement: stmt_facts(*b.stmt, col, out, block, pts); break;
  }
  return out;
}

bool Dfg::has_use(int def_block, LocId loc) const {
  for (const auto& e : edges)
    if (e.from == def_block && e.location == loc) return true;
  return false;
}

std::set<int> Dfg::forward_closure(int block) const {
  std::set<int> seen;
  std::deque<int> work{block};
  while (!work.empty()) {
    int b = work.front();
    work.pop_front();
    for (const auto& e : edges) {
      if (e.from != b || seen.count(e.to)) continue;
      seen.insert(e.to);
      work.push_back(e.to);
    }
  }
  return seen;
}

std::string Dfg::dump() const {
  std::ostringstream os;
  for (const auto& e : edges) os << e.from << " -> " << e.to << " [loc=" << e.location << "]\n";
  return os.str();
}

Dfg build_dfg(const Cfg& cfg, const sema::Program& program, const PointsToMap& pts,
              const Summaries& summaries) {
  Dfg dfg;
  std::size_t n = cfg.blocks.size();
  dfg.facts.reserve(n);
  for (std::size_t b = 0; b < n; ++b)
    dfg.facts.push_back(block_facts(cfg, static_cast<int>(b), program, pts, &summaries));

  // Reaching definitions; a definition is a (block, location) pair.
  using Def = std::pair<int, LocId>;
  std::vector<std::set<Def>> in(n), out(n);
  std::vector<std::set<LocId>> strong(n);
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& ev : dfg.facts[b].events)
      if (ev.strong) strong[b].insert(ev.target);

  std::deque<int> work;
  for (std::size_t b = 0; b < n; ++b) work.push_back(static_cast<int>(b));
  std::vector<bool> queued(n, true);
  while (!work.empty()) {
    int b = work.front();
    work.pop_front();
    queued[b] = false;
    std::set<Def> new_in;
    for (int p : cfg.preds(b)) new_in.insert(out[p].begin(), out[p].end());
    std::set<Def> new_out;
    for (const auto& d : new_in)
      if (!strong[b].count(d.second)) new_out.insert(d);
    for (LocId l : dfg.facts[b].writes) new_out.insert({b, l});
    in[b] = std::move(new_in);
    if (new_out != out[b]) {
      out[b] = std::move(new_out);
      for (int s : cfg.succs(b))
        if (!queued[s]) {
          queued[s] = true;
          work.push_back(s);
        }
    }
  }
  for (std::size_t b = 0; b < n; ++b)
    for (const auto& [d, l] : in[b])
      if (dfg.facts[b].reads.count(l)) dfg.edges.push_back({d, static_cast<int>(b), l});
  std::sort(dfg.edges.begin(), dfg.edges.end());
  dfg.edges.erase(std::unique(dfg.edges.begin(), dfg.edges.end()), dfg.edges.end());
  return dfg;
}

std::vector<Dependence> classify_dependences(const Cfg& cfg, const Dfg& dfg,
                                             const std::set<int>& window) {
  std::vector<int> blocks;
  if (window.empty())
    blocks = cfg.statement_blocks();
  else
    blocks.assign(window.begin(), window.end());
  std::vector<Dependence> out;
  for (int s1 : blocks) {
    const auto& reach = cfg.reachable_from(s1);
    const BlockFacts& f1 = dfg.facts[s1];
    for (int s2 : blocks) {
      if (s1 == s2 || !reach[s2]) continue;
      const BlockFacts& f2 = dfg.facts[s2];
      auto emit = [&](const std::set<LocId>& a, const std::set<LocId>& b, DepKind k) {
        for (LocId l : a)
          if (b.count(l)) out.push_back({s1, s2, k, l});
      };
      emit(f1.writes, f2.reads, DepKind::RAW);
      emit(f1.reads, f2.writes, DepKind::WAR);
      emit(f1.writes, f2.writes, DepKind::WAW);
      emit(f1.reads, f2.reads, DepKind::RAR);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FunctionAnalysis analyze_function(const FunctionDef& fn, const sema::ContractModel& contract,
                                  const sema::Program& program, const PointsToMap& pts,
                                  const Summaries& summaries) {
  FunctionAnalysis fa;
  fa.cfg = build_cfg(fn, contract);
  fa.dfg = build_dfg(fa.cfg, program, pts, summaries);
  return fa;
}

}  // namespace solfix::analysis
