#include "solfix/cfg.hpp"

#include <deque>
#include <optional>
#include <sstream>

#include "solfix/ast_walk.hpp"

namespace solfix::analysis {

using namespace ast;

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Entry: return "entry";
    case BlockKind::Exit: return "exit";
    case BlockKind::Statement: return "statement";
    case BlockKind::Condition: return "condition";
    case BlockKind::LoopPost: return "loop-post";
  }
  return "statement";
}

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Seq: return "seq";
    case EdgeKind::True: return "true";
    case EdgeKind::False: return "false";
    case EdgeKind::LoopBack: return "loop-back";
  }
  return "seq";
}

bool always_reverts(const Stmt& s) {
  if (s.kind == StmtKind::Throw) return true;
  if (s.kind != StmtKind::Expression) return false;
  const Expr* e = strip_parens(static_cast<const ExprStmt&>(s).expr.get());
  if (!e || e->kind != ExprKind::Call) return false;
  const Expr* callee = strip_parens(static_cast<const FunctionCall&>(*e).callee.get());
  return callee && callee->kind == ExprKind::Identifier &&
         static_cast<const Identifier&>(*callee).name == "revert";
}

int Cfg::block_of(const Stmt* stmt, int scope) const {
  for (const auto& b : blocks)
    if (b.stmt == stmt && b.scope == scope && b.kind != BlockKind::LoopPost) return b.id;
  return -1;
}

const std::vector<bool>& Cfg::reachable_from(int b) const {
  if (reach_.empty()) reach_.resize(blocks.size());
  auto& r = reach_[b];
  if (!r.empty()) return r;
  r.assign(blocks.size(), false);
  std::deque<int> work(succ_[b].begin(), succ_[b].end());
  while (!work.empty()) {
    int n = work.front();
    work.pop_front();
    if (r[n]) continue;
    r[n] = true;
    for (int s : succ_[n])
      if (!r[s]) work.push_back(s);
  }
  return r;
}

std::vector<int> Cfg::statement_blocks() const {
  std::vector<int> out;
  for (const auto& b : blocks)
    if (b.kind != BlockKind::Entry && b.kind != BlockKind::Exit) out.push_back(b.id);
  return out;
}

void Cfg::finalize() {
  succ_.assign(blocks.size(), {});
  pred_.assign(blocks.size(), {});
  for (const auto& e : edges) {
    succ_[e.from].push_back(e.to);
    pred_[e.to].push_back(e.from);
  }
  reach_.clear();
}

std::string Cfg::dump() const {
  std::ostringstream os;
  for (const auto& b : blocks) {
    os << b.id << " [" << to_string(b.kind);
    if (b.stmt) os << " stmt=" << raw(b.stmt->id);
    if (b.scope) os << " scope=" << b.scope;
    if (b.in_suffix) os << " suffix";
    os << "]\n";
  }
  for (const auto& e : edges) os << e.from << " -> " << e.to << " [" << to_string(e.kind) << "]\n";
  return os.str();
}

namespace {

using Pending = std::vector<std::pair<int, EdgeKind>>;

class Builder {
public:
  Builder(const FunctionDef& fn, const sema::ContractModel& model) : fn_(fn), model_(model) {}

  Cfg run() {
    cfg_.function = &fn_;
    cfg_.contract = &model_.def();
    add(BlockKind::Entry, nullptr, nullptr);
    add(BlockKind::Exit, nullptr, nullptr);
    for (const auto& inv : fn_.modifiers) {
      const ModifierDef* md = model_.modifier(inv.name);
      if (!md) {
        // Base constructor invocations look like modifiers.
        bool base_ctor = false;
        for (const auto* c : model_.chain())
          if (c->name == inv.name) base_ctor = true;
        if (fn_.is_constructor() && base_ctor) continue;
        throw MissingModifier(inv.name);
      }
      ModifierInstance mi;
      mi.def = md;
      mi.invocation = &inv;
      mi.scope = static_cast<int>(cfg_.modifiers.size()) + 1;
      for (std::size_t i = 0; i < md->params.size() && i < inv.args.size(); ++i)
        mi.bindings.emplace_back(md->params[i].get(), inv.args[i].get());
      cfg_.modifiers.push_back(std::move(mi));
    }
    Pending out = level(0, {{cfg_.entry, EdgeKind::Seq}});
    connect(out, cfg_.exit);
    cfg_.finalize();
    return std::move(cfg_);
  }

private:
  struct Loop {
    int continue_target;  // -1: collect into continues
    Pending breaks;
    Pending continues;
  };

  struct Level {
    int scope;
    bool after_placeholder = false;
    Pending returns;
  };

  int add(BlockKind kind, const Stmt* stmt, const Expr* expr) {
    CfgBlock b;
    b.id = static_cast<int>(cfg_.blocks.size());
    b.kind = kind;
    b.stmt = stmt;
    b.expr = expr;
    if (!levels_.empty()) {
      b.scope = levels_.back().scope;
      b.in_suffix = b.scope > 0 && levels_.back().after_placeholder;
    }
    b.conditions = conditions_;
    b.loop_depth = static_cast<int>(loops_.size());
    cfg_.blocks.push_back(std::move(b));
    return cfg_.blocks.back().id;
  }

  void connect(const Pending& from, int to, std::optional<EdgeKind> force = std::nullopt) {
    for (const auto& [f, k] : from) cfg_.edges.push_back({f, to, force ? *force : k});
  }

  // Level k < n inlines modifier k; level n is the function body.
  Pending level(std::size_t k, Pending in) {
    std::size_t n = cfg_.modifiers.size();
    const Block* body = k < n ? cfg_.modifiers[k].def->body.get() : fn_.body.get();
    levels_.push_back(Level{k < n ? cfg_.modifiers[k].scope : 0, false, {}});
    auto saved_loops = std::move(loops_);
    loops_.clear();
    Pending out = body ? stmt(*body, std::move(in)) : std::move(in);
    loops_ = std::move(saved_loops);
    Level done = std::move(levels_.back());
    levels_.pop_back();
    out.insert(out.end(), done.returns.begin(), done.returns.end());
    return out;
  }

  Pending stmt(const Stmt& s, Pending in) {
    switch (s.kind) {
      case StmtKind::Block: {
        for (const auto& c : static_cast<const Block&>(s).statements) in = stmt(*c, std::move(in));
        return in;
      }
      case StmtKind::Placeholder: {
        std::size_t k = static_cast<std::size_t>(levels_.back().scope);
        Pending out = level(k, std::move(in));
        levels_.back().after_placeholder = true;
        return out;
      }
      case StmtKind::If: {
        const auto& x = static_cast<const IfStmt&>(s);
        int c = add(BlockKind::Condition, &s, x.cond.get());
        connect(in, c);
        conditions_.push_back(c);
        Pending out = stmt(*x.then, {{c, EdgeKind::True}});
        Pending other = x.otherwise ? stmt(*x.otherwise, {{c, EdgeKind::False}})
                                    : Pending{{c, EdgeKind::False}};
        conditions_.pop_back();
        out.insert(out.end(), other.begin(), other.end());
        return out;
      }
      case StmtKind::While: {
        const auto& x = static_cast<const WhileStmt&>(s);
        int c = add(BlockKind::Condition, &s, x.cond.get());
        connect(in, c);
        conditions_.push_back(c);
        loops_.push_back(Loop{c, {}, {}});
        Pending body = stmt(*x.body, {{c, EdgeKind::True}});
        connect(body, c, EdgeKind::LoopBack);
        Loop loop = std::move(loops_.back());
        loops_.pop_back();
        conditions_.pop_back();
        loop.breaks.push_back({c, EdgeKind::False});
        return loop.breaks;
      }
      case StmtKind::For: {
        const auto& x = static_cast<const ForStmt&>(s);
        if (x.init) in = stmt(*x.init, std::move(in));
        int c = add(BlockKind::Condition, &s, x.cond.get());
        connect(in, c);
        conditions_.push_back(c);
        loops_.push_back(Loop{-1, {}, {}});
        Pending body = stmt(*x.body, {{c, EdgeKind::True}});
        Loop loop = std::move(loops_.back());
        loops_.pop_back();
        body.insert(body.end(), loop.continues.begin(), loop.continues.end());
        if (x.post) {
          int p = add(BlockKind::LoopPost, &s, x.post.get());
          connect(body, p);
          cfg_.edges.push_back({p, c, EdgeKind::LoopBack});
        } else {
          connect(body, c, EdgeKind::LoopBack);
        }
        conditions_.pop_back();
        loop.breaks.push_back({c, EdgeKind::False});
        return loop.breaks;
      }
      case StmtKind::DoWhile: {
        const auto& x = static_cast<const DoWhileStmt&>(s);
        std::size_t first = cfg_.blocks.size();
        loops_.push_back(Loop{-1, {}, {}});
        Pending body = stmt(*x.body, std::move(in));
        Loop loop = std::move(loops_.back());
        loops_.pop_back();
        body.insert(body.end(), loop.continues.begin(), loop.continues.end());
        int c = add(BlockKind::Condition, &s, x.cond.get());
        connect(body, c);
        int head = first < static_cast<std::size_t>(c) ? static_cast<int>(first) : c;
        cfg_.edges.push_back({c, head, EdgeKind::LoopBack});
        loop.breaks.push_back({c, EdgeKind::False});
        return loop.breaks;
      }
      case StmtKind::Return: {
        int b = add(BlockKind::Statement, &s, nullptr);
        connect(in, b);
        levels_.back().returns.push_back({b, EdgeKind::Seq});
        return {};
      }
      case StmtKind::Break:
      case StmtKind::Continue: {
        int b = add(BlockKind::Statement, &s, nullptr);
        connect(in, b);
        if (loops_.empty()) return {};
        Loop& loop = loops_.back();
        if (s.kind == StmtKind::Break) {
          loop.breaks.push_back({b, EdgeKind::Seq});
        } else if (loop.continue_target >= 0) {
          cfg_.edges.push_back({b, loop.continue_target, EdgeKind::LoopBack});
        } else {
          loop.continues.push_back({b, EdgeKind::Seq});
        }
        return {};
      }
      default: {
        int b = add(BlockKind::Statement, &s, nullptr);
        connect(in, b);
        if (always_reverts(s)) {
          cfg_.edges.push_back({b, cfg_.exit, EdgeKind::Seq});
          return {};
        }
        return {{b, EdgeKind::Seq}};
      }
    }
  }

  const FunctionDef& fn_;
  const sema::ContractModel& model_;
  Cfg cfg_;
  std::vector<Level> levels_;
  std::vector<Loop> loops_;
  std::vector<int> conditions_;
};

}  // namespace

Cfg build_cfg(const FunctionDef& fn, const sema::ContractModel& contract) {
  return Builder(fn, contract).run();
}

}  // namespace solfix::analysis
