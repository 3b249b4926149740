#include "solfix/patcher.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "solfix/ast_walk.hpp"
#include "solfix/parser.hpp"
#include "solfix/printer.hpp"

namespace solfix::patch {

using namespace ast;
using analysis::LocId;
using analysis::UnitAnalysis;
using detect::Finding;

const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::InsertStatement: return "insert-statement";
    case EditKind::MoveStatement: return "move-statement";
    case EditKind::WrapInRequire: return "wrap-in-require";
    case EditKind::ReplaceExpr: return "replace-expr";
    case EditKind::DeclareLocal: return "declare-local";
    case EditKind::AddStateVar: return "add-state-var";
    case EditKind::AddFunction: return "add-function";
    case EditKind::AddModifierGuard: return "add-modifier-guard";
  }
  return "";
}

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::Require: return "require";
    case Pattern::Reorder: return "reorder";
    case Pattern::Lock: return "lock";
    case Pattern::Validation: return "validation";
    case Pattern::Withdraw: return "withdraw";
  }
  return "";
}

const char* to_string(Action a) {
  switch (a) {
    case Action::IntroduceTemp: return "introduce-temp";
    case Action::MovePair: return "move-pair";
    case Action::MoveSingle: return "move-single";
    case Action::Blocked: return "blocked";
  }
  return "";
}

std::string Edit::describe() const {
  std::string out = to_string(kind);
  if (!name.empty()) out += " " + name;
  if (stmt) out += " `" + print_stmt(*stmt) + "`";
  if (expr && kind == EditKind::ReplaceExpr) out += " `" + print_expr(*expr) + "`";
  return out;
}

GasEstimate estimate_cost(const EditScript& script) {
  GasEstimate g;
  g.pattern = script.pattern;
  if (script.empty()) return g;
  switch (script.pattern) {
    case Pattern::Lock: g.delta = 25000; break;
    case Pattern::Reorder: g.delta = 5; break;
    case Pattern::Require:
    case Pattern::Validation: g.delta = 20 * static_cast<long>(script.edits.size()); break;
    case Pattern::Withdraw: g.delta = 10 * static_cast<long>(script.edits.size()); break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Locating nodes in a mutable unit

namespace {

struct Location {
  Block* block = nullptr;  // statement is block->statements[index]
  std::size_t index = 0;
  StmtPtr* slot = nullptr;  // or the only statement of a branch/body slot

  StmtPtr& ptr() { return slot ? *slot : block->statements[index]; }
};

bool search_stmt(Stmt& s, NodeId id, Location& out);

bool search_slot(StmtPtr& p, NodeId id, Location& out) {
  if (!p) return false;
  if (p->id == id) {
    out = Location{nullptr, 0, &p};
    return true;
  }
  return search_stmt(*p, id, out);
}

bool search_block(Block& b, NodeId id, Location& out) {
  for (std::size_t i = 0; i < b.statements.size(); ++i) {
    if (b.statements[i]->id == id) {
      out = Location{&b, i, nullptr};
      return true;
    }
    if (search_stmt(*b.statements[i], id, out)) return true;
  }
  return false;
}

bool search_stmt(Stmt& s, NodeId id, Location& out) {
  switch (s.kind) {
    case StmtKind::Block: return search_block(static_cast<Block&>(s), id, out);
    case StmtKind::If: {
      auto& x = static_cast<IfStmt&>(s);
      return search_slot(x.then, id, out) || search_slot(x.otherwise, id, out);
    }
    case StmtKind::For: {
      auto& x = static_cast<ForStmt&>(s);
      return search_slot(x.init, id, out) || search_slot(x.body, id, out);
    }
    case StmtKind::While: return search_slot(static_cast<WhileStmt&>(s).body, id, out);
    case StmtKind::DoWhile: return search_slot(static_cast<DoWhileStmt&>(s).body, id, out);
    default: return false;
  }
}

template <typename F>
void each_body(SourceUnit& unit, F&& f) {
  for (auto& c : unit.contracts) {
    for (auto& m : c->members) {
      if (m->kind == MemberKind::Function) {
        auto& fn = static_cast<FunctionDef&>(*m);
        if (fn.body) f(*c, &fn, *fn.body);
      } else if (m->kind == MemberKind::Modifier) {
        auto& md = static_cast<ModifierDef&>(*m);
        if (md.body) f(*c, nullptr, *md.body);
      }
    }
  }
}

Location find_stmt(SourceUnit& unit, NodeId id) {
  Location out;
  bool found = false;
  each_body(unit, [&](ContractDef&, FunctionDef*, Block& body) {
    if (!found) found = search_block(body, id, out);
  });
  if (!found) throw EditError("no statement with id " + std::to_string(raw(id)));
  return out;
}

Block* find_block(SourceUnit& unit, NodeId id) {
  Block* out = nullptr;
  each_body(unit, [&](ContractDef&, FunctionDef*, Block& body) {
    walk_stmt(body, [&](Stmt& s) {
      if (!out && s.kind == StmtKind::Block && s.id == id) out = &static_cast<Block&>(s);
    });
  });
  if (!out) throw EditError("no block with id " + std::to_string(raw(id)));
  return out;
}

FunctionDef* find_function(SourceUnit& unit, NodeId id) {
  for (auto& c : unit.contracts)
    for (auto& m : c->members)
      if (m->kind == MemberKind::Function && m->id == id) return static_cast<FunctionDef*>(m.get());
  throw EditError("no function with id " + std::to_string(raw(id)));
}

ExprPtr* search_expr(ExprPtr& p, NodeId id) {
  if (!p) return nullptr;
  if (p->id == id) return &p;
  ExprPtr* hit = nullptr;
  auto sub = [&](ExprPtr& c) {
    if (!hit) hit = search_expr(c, id);
  };
  switch (p->kind) {
    case ExprKind::Member: sub(static_cast<MemberAccess&>(*p).base); break;
    case ExprKind::Index: {
      auto& x = static_cast<IndexAccess&>(*p);
      sub(x.base);
      sub(x.index);
      break;
    }
    case ExprKind::Call: {
      auto& x = static_cast<FunctionCall&>(*p);
      sub(x.callee);
      for (auto& a : x.args) sub(a);
      break;
    }
    case ExprKind::CallOptions: {
      auto& x = static_cast<CallOptions&>(*p);
      sub(x.callee);
      for (auto& a : x.values) sub(a);
      break;
    }
    case ExprKind::Unary: sub(static_cast<UnaryOp&>(*p).operand); break;
    case ExprKind::Binary: {
      auto& x = static_cast<BinaryOp&>(*p);
      sub(x.lhs);
      sub(x.rhs);
      break;
    }
    case ExprKind::Assign: {
      auto& x = static_cast<Assignment&>(*p);
      sub(x.lhs);
      sub(x.rhs);
      break;
    }
    case ExprKind::Conditional: {
      auto& x = static_cast<Conditional&>(*p);
      sub(x.cond);
      sub(x.then);
      sub(x.otherwise);
      break;
    }
    case ExprKind::Tuple:
      for (auto& a : static_cast<TupleExpr&>(*p).elements) sub(a);
      break;
    case ExprKind::InlineArray:
      for (auto& a : static_cast<InlineArray&>(*p).elements) sub(a);
      break;
    default: break;
  }
  return hit;
}

ExprPtr* find_expr(SourceUnit& unit, NodeId id) {
  ExprPtr* hit = nullptr;
  auto sub = [&](ExprPtr& e) {
    if (!hit) hit = search_expr(e, id);
  };
  each_body(unit, [&](ContractDef&, FunctionDef*, Block& body) {
    walk_stmt(body, [&](Stmt& s) {
      switch (s.kind) {
        case StmtKind::VarDecl: sub(static_cast<VarDeclStmt&>(s).init); break;
        case StmtKind::Expression: sub(static_cast<ExprStmt&>(s).expr); break;
        case StmtKind::If: sub(static_cast<IfStmt&>(s).cond); break;
        case StmtKind::For: {
          auto& x = static_cast<ForStmt&>(s);
          sub(x.cond);
          sub(x.post);
          break;
        }
        case StmtKind::While: sub(static_cast<WhileStmt&>(s).cond); break;
        case StmtKind::DoWhile: sub(static_cast<DoWhileStmt&>(s).cond); break;
        case StmtKind::Return: sub(static_cast<ReturnStmt&>(s).value); break;
        case StmtKind::Emit: sub(static_cast<EmitStmt&>(s).call); break;
        default: break;
      }
    });
  });
  if (!hit) throw EditError("no expression with id " + std::to_string(raw(id)));
  return hit;
}

void insert_at(SourceUnit& unit, Location loc, StmtPtr s, bool after) {
  if (loc.block) {
    auto& v = loc.block->statements;
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(loc.index + (after ? 1 : 0)), std::move(s));
    return;
  }
  // A lone branch statement becomes a block holding both statements.
  auto b = std::make_unique<Block>();
  b->id = unit.fresh_id();
  b->span = Span::synthesized();
  StmtPtr old = std::move(*loc.slot);
  if (after) {
    b->statements.push_back(std::move(old));
    b->statements.push_back(std::move(s));
  } else {
    b->statements.push_back(std::move(s));
    b->statements.push_back(std::move(old));
  }
  *loc.slot = std::move(b);
}

void place(SourceUnit& unit, const Edit& e, StmtPtr s) {
  if (e.after) {
    insert_at(unit, find_stmt(unit, e.target), std::move(s), true);
  } else if (e.before != NodeId::Invalid) {
    insert_at(unit, find_stmt(unit, e.before), std::move(s), false);
  } else {
    find_block(unit, e.parent)->statements.push_back(std::move(s));
  }
}

StmtPtr snippet(SourceUnit& unit, const std::string& text) { return parse_statement(text, unit.ids); }

void add_guard(SourceUnit& unit, FunctionDef& fn, const std::string& lock) {
  Block& body = *fn.body;
  std::vector<NodeId> returns;
  walk_stmt(body, [&](Stmt& s) {
    if (s.kind == StmtKind::Return) returns.push_back(s.id);
  });
  for (NodeId r : returns) insert_at(unit, find_stmt(unit, r), snippet(unit, lock + " = false;"), false);
  bool falls_through = body.statements.empty() ||
                       (body.statements.back()->kind != StmtKind::Return &&
                        !analysis::always_reverts(*body.statements.back()));
  if (falls_through) body.statements.push_back(snippet(unit, lock + " = false;"));
  body.statements.insert(body.statements.begin(), snippet(unit, lock + " = true;"));
  body.statements.insert(body.statements.begin(), snippet(unit, "require(!" + lock + ");"));
}

void add_member(ContractDef& c, MemberPtr m) {
  auto& ms = c.members;
  if (m->kind == MemberKind::StateVar) {
    auto last = std::find_if(ms.rbegin(), ms.rend(),
                             [](const MemberPtr& x) { return x->kind == MemberKind::StateVar; });
    ms.insert(last == ms.rend() ? ms.begin() : last.base(), std::move(m));
    return;
  }
  auto* fn = static_cast<FunctionDef*>(m.get());
  if (m->kind == MemberKind::Function && fn->is_constructor()) {
    auto first = std::find_if(ms.begin(), ms.end(),
                              [](const MemberPtr& x) { return x->kind == MemberKind::Function; });
    ms.insert(first, std::move(m));
    return;
  }
  ms.push_back(std::move(m));
}

}  // namespace

void apply(const EditScript& script, SourceUnit& unit) {
  for (const Edit& e : script.edits) {
    switch (e.kind) {
      case EditKind::InsertStatement: place(unit, e, e.stmt->clone()); break;
      case EditKind::DeclareLocal: {
        if (e.target != NodeId::Invalid && !e.after) {
          // Declare the value of an expression statement in place.
          Location loc = find_stmt(unit, e.target);
          StmtPtr& p = loc.ptr();
          if (p->kind != StmtKind::Expression) throw EditError("declare target is not an expression");
          StmtPtr decl = e.stmt->clone();
          auto& vd = static_cast<VarDeclStmt&>(*decl);
          vd.id = p->id;
          vd.init = std::move(static_cast<ExprStmt&>(*p).expr);
          p = std::move(decl);
        } else {
          place(unit, e, e.stmt->clone());
        }
        break;
      }
      case EditKind::MoveStatement: {
        Location from = find_stmt(unit, e.target);
        if (!from.block) throw EditError("moved statement is not in a block");
        StmtPtr s = std::move(from.block->statements[from.index]);
        from.block->statements.erase(from.block->statements.begin() +
                                     static_cast<std::ptrdiff_t>(from.index));
        place(unit, e, std::move(s));
        break;
      }
      case EditKind::WrapInRequire: {
        Location loc = find_stmt(unit, e.target);
        StmtPtr& p = loc.ptr();
        if (p->kind != StmtKind::Expression) throw EditError("wrap target is not an expression");
        auto& es = static_cast<ExprStmt&>(*p);
        auto call = std::make_unique<FunctionCall>();
        call->id = unit.fresh_id();
        call->span = Span::synthesized();
        auto callee = std::make_unique<Identifier>();
        callee->id = unit.fresh_id();
        callee->span = Span::synthesized();
        callee->name = "require";
        call->callee = std::move(callee);
        call->args.push_back(std::move(es.expr));
        es.expr = std::move(call);
        break;
      }
      case EditKind::ReplaceExpr: *find_expr(unit, e.target) = e.expr->clone(); break;
      case EditKind::AddStateVar:
      case EditKind::AddFunction: {
        ContractDef* c = unit.find_contract_mut(e.contract);
        if (!c) throw EditError("no contract " + e.contract);
        add_member(*c, e.member->clone());
        break;
      }
      case EditKind::AddModifierGuard: {
        FunctionDef* fn = find_function(unit, e.target);
        if (!fn->body) throw EditError("guarded function has no body");
        add_guard(unit, *fn, e.name);
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Shared helpers for the fix builders

namespace {

Edit make_edit(EditKind kind, const Finding& f) {
  Edit e;
  e.kind = kind;
  e.finding = f.id();
  return e;
}

std::set<std::string> taken_names(const sema::Program& p, const ContractDef& c) {
  std::set<std::string> out;
  const sema::ContractModel* model = p.model(c);
  std::vector<const ContractDef*> chain;
  if (model)
    chain = model->chain();
  else
    chain.push_back(&c);
  for (const auto* def : chain) {
    out.insert(def->name);
    for (const auto& m : def->members) {
      switch (m->kind) {
        case MemberKind::StateVar: out.insert(static_cast<const StateVarDef&>(*m).var->name); break;
        case MemberKind::Function: out.insert(static_cast<const FunctionDef&>(*m).name); break;
        case MemberKind::Modifier: out.insert(static_cast<const ModifierDef&>(*m).name); break;
        case MemberKind::Struct: out.insert(static_cast<const StructDef&>(*m).name); break;
        case MemberKind::Enum: out.insert(static_cast<const EnumDef&>(*m).name); break;
        case MemberKind::Event: out.insert(static_cast<const EventDef&>(*m).name); break;
        case MemberKind::Using: break;
      }
    }
  }
  for (const auto& [decl, info] : p.vars())
    if (std::find(chain.begin(), chain.end(), info.contract) != chain.end())
      out.insert(decl->name);
  for (const auto& other : p.unit().contracts) out.insert(other->name);
  return out;
}

std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  for (int n = 2; taken.count(name); ++n) name = base + std::to_string(n);
  taken.insert(name);
  return name;
}

const Block* parent_block(const Block& b, const Stmt* target, std::size_t& index) {
  for (std::size_t i = 0; i < b.statements.size(); ++i) {
    if (b.statements[i].get() == target) {
      index = i;
      return &b;
    }
  }
  const Block* hit = nullptr;
  for (const auto& s : b.statements) {
    if (hit) break;
    child_stmts(*s, [&](const Stmt& c) {
      if (hit) return;
      if (c.kind == StmtKind::Block) {
        hit = parent_block(static_cast<const Block&>(c), target, index);
      } else {
        walk_stmt(c, [&](const Stmt& d) {
          if (!hit && d.kind == StmtKind::Block)
            hit = parent_block(static_cast<const Block&>(d), target, index);
        });
      }
    });
  }
  return hit;
}

}  // namespace

EditScript fix_unhandled_exception(const Finding& f, const UnitAnalysis& a, SourceUnit& unit) {
  EditScript script;
  script.finding = f.id();
  script.pattern = Pattern::Require;
  if (!f.site.stmt || !f.site.call) throw NotApplicable("no call site");
  const Stmt& stmt = *f.site.stmt;
  detect::ResultFlow flow = detect::result_flow(stmt, *f.site.call);
  sema::CallInfo ci = a.program.classify(*f.site.call);
  bool returns_tuple = unit.version().at_least(0, 5) && ci.kind != sema::CallKind::EtherSend;
  switch (flow.kind) {
    case detect::ResultFlow::Bare: {
      if (!returns_tuple) {
        Edit e = make_edit(EditKind::WrapInRequire, f);
        e.target = stmt.id;
        script.edits.push_back(std::move(e));
        break;
      }
      const ContractDef* c = a.unit.find_contract(f.site.contract);
      std::set<std::string> taken = taken_names(a.program, *c);
      std::string ok = fresh_name("success", taken);
      Edit decl = make_edit(EditKind::DeclareLocal, f);
      decl.target = stmt.id;
      decl.name = ok;
      decl.stmt = parse_statement("(bool " + ok + ", ) = 0;", unit.ids);
      Edit check = make_edit(EditKind::InsertStatement, f);
      check.target = stmt.id;
      check.after = true;
      check.stmt = parse_statement("require(" + ok + ");", unit.ids);
      script.edits.push_back(std::move(decl));
      script.edits.push_back(std::move(check));
      break;
    }
    case detect::ResultFlow::Local:
    case detect::ResultFlow::Assigned: {
      std::string value;
      if (flow.kind == detect::ResultFlow::Local) {
        if (!flow.local || flow.local->name.empty()) throw NotApplicable("result is discarded");
        value = flow.local->name;
      } else {
        value = print_expr(*flow.target);
      }
      Edit check = make_edit(EditKind::InsertStatement, f);
      check.target = stmt.id;
      check.after = true;
      check.stmt = parse_statement("require(" + value + ");", unit.ids);
      script.edits.push_back(std::move(check));
      break;
    }
    case detect::ResultFlow::Consumed: throw NotApplicable("call result is already consumed");
  }
  return script;
}

EditScript fix_missing_input_validation(const Finding& f, const UnitAnalysis& a,
                                        SourceUnit& unit) {
  EditScript script;
  script.finding = f.id();
  script.pattern = Pattern::Validation;
  const FunctionDef* fn = f.site.fn;
  const VarDecl* p = f.site.param;
  if (!fn || !fn->body || !p) throw NotApplicable("no parameter");
  sema::TypeRef t = a.program.type_of(*p);
  std::string subject;
  if (t.is_address())
    subject = p->name;
  else if (t.kind == sema::TypeRef::Kind::Contract)
    subject = "address(" + p->name + ")";
  else
    throw NotApplicable("parameter is not an address");
  for (std::size_t i = 0; i < fn->params.size(); ++i)
    if (fn->params[i].get() == p && detect::parameter_validated(*fn, i, a.program))
      throw NotApplicable("parameter already validated");
  Edit e = make_edit(EditKind::InsertStatement, f);
  if (fn->body->statements.empty())
    e.parent = fn->body->id;
  else
    e.before = fn->body->statements.front()->id;
  e.stmt = parse_statement("require(" + subject + " != address(0));", unit.ids);
  script.edits.push_back(std::move(e));
  return script;
}

EditScript fix_locked_ether(const Finding& f, const UnitAnalysis& a, SourceUnit& unit) {
  EditScript script;
  script.finding = f.id();
  script.pattern = Pattern::Withdraw;
  const ContractDef* c = a.unit.find_contract(f.site.contract);
  if (!c || c->kind != ContractKind::Contract) throw NotApplicable("not a contract");
  const sema::ContractModel* model = a.program.model(*c);
  std::set<std::string> taken = taken_names(a.program, *c);

  // An address state variable named like an owner, or one the constructor
  // sets to msg.sender.
  std::string owner;
  for (const auto* sv : model->state_vars()) {
    std::string lower;
    for (char ch : sv->var->name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (a.program.type_of(*sv->var).is_address() && lower.find("owner") != std::string::npos) {
      owner = sv->var->name;
      break;
    }
  }
  if (owner.empty()) {
    for (const auto* fn : model->functions()) {
      if (!fn->is_constructor() || !fn->body) continue;
      walk_stmt_exprs(*fn->body, [&](const Expr& e) {
        if (!owner.empty() || e.kind != ExprKind::Assign) return owner.empty();
        const auto& as = static_cast<const Assignment&>(e);
        const VarDecl* v = a.program.var_of(*strip_parens(as.lhs.get()));
        const sema::VarInfo* vi = v ? a.program.info(v) : nullptr;
        if (vi && vi->role == sema::VarRole::State && a.program.type_of(*v).is_address() &&
            print_expr(*as.rhs) == "msg.sender")
          owner = v->name;
        return owner.empty();
      });
    }
  }
  if (owner.empty()) {
    owner = fresh_name("owner", taken);
    Edit var = make_edit(EditKind::AddStateVar, f);
    var.contract = c->name;
    var.name = owner;
    var.member = parse_member("address private " + owner + ";", unit.ids, c->name);
    script.edits.push_back(std::move(var));
    const FunctionDef* ctor = nullptr;
    for (const auto* fn : c->functions())
      if (fn->is_constructor()) ctor = fn;
    if (ctor && ctor->body) {
      Edit e = make_edit(EditKind::InsertStatement, f);
      if (ctor->body->statements.empty())
        e.parent = ctor->body->id;
      else
        e.before = ctor->body->statements.front()->id;
      e.stmt = parse_statement(owner + " = msg.sender;", unit.ids);
      script.edits.push_back(std::move(e));
    } else {
      std::string head = unit.version().at_least(0, 4, 22) ? "constructor() public"
                                                          : "function " + c->name + "() public";
      Edit e = make_edit(EditKind::AddFunction, f);
      e.contract = c->name;
      e.name = "constructor";
      e.member = parse_member(head + " { " + owner + " = msg.sender; }", unit.ids, c->name);
      script.edits.push_back(std::move(e));
    }
  }
  std::string name = taken.count("withdraw") ? fresh_name("withdrawEther", taken) : "withdraw";
  Edit w = make_edit(EditKind::AddFunction, f);
  w.contract = c->name;
  w.name = name;
  w.member = parse_member("function " + name + "() public { require(msg.sender == " + owner +
                              "); msg.sender.transfer(address(this).balance); }",
                          unit.ids, c->name);
  script.edits.push_back(std::move(w));
  return script;
}

EditScript apply_lock(const Finding& f, const UnitAnalysis& a, SourceUnit& unit,
                      const std::string& lock, bool declare) {
  EditScript script;
  script.finding = f.id();
  script.pattern = Pattern::Lock;
  const FunctionDef* fn = f.site.fn;
  if (!fn || !fn->body) throw NotApplicable("no function body");
  (void)a;
  if (declare) {
    Edit var = make_edit(EditKind::AddStateVar, f);
    var.contract = f.site.contract;
    var.name = lock;
    var.member = parse_member("bool private " + lock + ";", unit.ids, f.site.contract);
    script.edits.push_back(std::move(var));
  }
  Edit guard = make_edit(EditKind::AddModifierGuard, f);
  guard.target = fn->id;
  guard.name = lock;
  script.edits.push_back(std::move(guard));
  return script;
}

// ---------------------------------------------------------------------------
// Reorder planning

namespace {

struct StmtFacts {
  std::set<LocId> reads;
  std::set<LocId> writes;
  bool external_call = false;
  bool early_exit = false;
};

StmtFacts facts_of(const Stmt& top, const analysis::FunctionAnalysis& fa) {
  StmtFacts out;
  std::set<const Stmt*> inside;
  walk_stmt(top, [&](const Stmt& s) {
    inside.insert(&s);
    if (s.kind == StmtKind::Return || s.kind == StmtKind::Break || s.kind == StmtKind::Continue)
      out.early_exit = true;
  });
  for (const auto& b : fa.cfg.blocks) {
    if (b.scope != 0 || !b.stmt || !inside.count(b.stmt)) continue;
    const auto& f = fa.dfg.facts[b.id];
    out.reads.insert(f.reads.begin(), f.reads.end());
    out.writes.insert(f.writes.begin(), f.writes.end());
    for (const auto& cs : f.calls)
      if (cs.info.is_external() && !cs.info.option_setter) out.external_call = true;
  }
  return out;
}

bool intersects(const std::set<LocId>& x, const std::set<LocId>& y) {
  return std::any_of(x.begin(), x.end(), [&](LocId l) { return y.count(l) > 0; });
}

/// Maximal variable-rooted read expressions in `top` that may denote `loc`.
/// Assignment targets are skipped (their indices are still searched).
void reads_of(const Stmt& top, LocId loc, const UnitAnalysis& a, std::vector<const Expr*>& out) {
  std::function<void(const Expr*, bool)> visit = [&](const Expr* e, bool target) {
    if (!e) return;
    if (e->kind == ExprKind::Identifier || e->kind == ExprKind::Member ||
        e->kind == ExprKind::Index) {
      const VarDecl* root = a.program.root_var(*e);
      if (root && a.pts.points_to(root).count(loc)) {
        if (!target) {
          out.push_back(e);
          return;
        }
      }
    }
    switch (e->kind) {
      case ExprKind::Member: visit(static_cast<const MemberAccess*>(e)->base.get(), target); break;
      case ExprKind::Index: {
        const auto* x = static_cast<const IndexAccess*>(e);
        visit(x->base.get(), target);
        visit(x->index.get(), false);
        break;
      }
      case ExprKind::Call: {
        const auto* x = static_cast<const FunctionCall*>(e);
        const Expr* callee = strip_parens(x->callee.get());
        if (callee && callee->kind == ExprKind::Member)
          visit(static_cast<const MemberAccess*>(callee)->base.get(), false);
        else
          visit(callee, false);
        for (const auto& arg : x->args) visit(arg.get(), false);
        break;
      }
      case ExprKind::CallOptions: {
        const auto* x = static_cast<const CallOptions*>(e);
        visit(x->callee.get(), false);
        for (const auto& v : x->values) visit(v.get(), false);
        break;
      }
      case ExprKind::Unary: {
        const auto* x = static_cast<const UnaryOp*>(e);
        visit(x->operand.get(), false);
        break;
      }
      case ExprKind::Binary: {
        const auto* x = static_cast<const BinaryOp*>(e);
        visit(x->lhs.get(), false);
        visit(x->rhs.get(), false);
        break;
      }
      case ExprKind::Assign: {
        const auto* x = static_cast<const Assignment*>(e);
        visit(x->lhs.get(), x->op == "=");
        visit(x->rhs.get(), false);
        break;
      }
      case ExprKind::Conditional: {
        const auto* x = static_cast<const Conditional*>(e);
        visit(x->cond.get(), false);
        visit(x->then.get(), false);
        visit(x->otherwise.get(), false);
        break;
      }
      case ExprKind::Tuple:
        for (const auto& el : static_cast<const TupleExpr*>(e)->elements) visit(el.get(), target);
        break;
      case ExprKind::InlineArray:
        for (const auto& el : static_cast<const InlineArray*>(e)->elements) visit(el.get(), false);
        break;
      default: break;
    }
  };
  walk_stmt(top, [&](const Stmt& s) { direct_exprs(s, [&](const Expr& e) { visit(&e, false); }); });
}

std::set<LocId> locations_read_by(const Expr& e, const UnitAnalysis& a) {
  std::set<LocId> out;
  walk_expr(e, [&](const Expr& x) {
    if (const VarDecl* v = a.program.var_of(x)) {
      const auto& pts = a.pts.points_to(v);
      out.insert(pts.begin(), pts.end());
    }
    return true;
  });
  return out;
}

std::string type_text(const sema::TypeRef& t) {
  using K = sema::TypeRef::Kind;
  if (t.kind == K::Elementary || t.kind == K::Contract || t.kind == K::Enum) return t.name;
  return "";
}

}  // namespace

ReorderPlan plan_reorder(const Finding& f, const UnitAnalysis& a) {
  ReorderPlan plan;
  plan.finding = f.id();
  plan.function = f.site.fn;
  plan.call = f.site.stmt;
  auto block_it = [&](const std::string& why) {
    plan.blocked = true;
    if (plan.reason.empty()) plan.reason = why;
    return plan;
  };
  const auto* fa = plan.function ? a.function(plan.function) : nullptr;
  if (!fa || !plan.call) return block_it("function not analyzed");
  const auto& cfg = fa->cfg;
  int site = cfg.block_of(plan.call, 0);
  if (site < 0) return block_it("call site not in the function body");
  if (cfg.blocks[site].loop_depth > 0) return block_it("call inside a loop");

  std::size_t call_index = 0;
  const Block* parent = parent_block(*plan.function->body, plan.call, call_index);
  if (!parent) return block_it("call is not a block statement");
  std::vector<const Stmt*> after;
  for (std::size_t i = call_index + 1; i < parent->statements.size(); ++i)
    after.push_back(parent->statements[i].get());

  // Top-level statements after the call that hold the storage writes.
  std::set<const Stmt*> moved;
  for (int w : detect::storage_writes_after(cfg, fa->dfg, site, a.pts)) {
    const auto& b = cfg.blocks[w];
    if (b.scope != 0) return block_it("write in a modifier after the placeholder");
    const Stmt* owner = nullptr;
    for (const Stmt* s : after) {
      walk_stmt(*s, [&](const Stmt& x) {
        if (&x == b.stmt) owner = s;
      });
      if (owner) break;
    }
    if (!owner) return block_it("write outside the call's block");
    moved.insert(owner);
  }
  if (moved.empty()) return block_it("no writes after the call");

  std::map<const Stmt*, StmtFacts> facts;
  facts[plan.call] = facts_of(*plan.call, *fa);
  for (const Stmt* s : after) facts[s] = facts_of(*s, *fa);
  std::vector<const Stmt*> writes(moved.begin(), moved.end());
  std::set<const Stmt*> original_writes = moved;

  // Position order: call first, then `after` in source order.
  std::vector<const Stmt*> window{plan.call};
  window.insert(window.end(), after.begin(), after.end());
  auto pos = [&](const Stmt* s) {
    return std::find(window.begin(), window.end(), s) - window.begin();
  };

  // Statements that wrote what a moved statement reads or writes must move
  // with it; the call itself cannot.
  for (bool changed = true; changed;) {
    changed = false;
    for (const Stmt* x : window) {
      if (moved.count(x)) continue;
      for (const Stmt* t : window) {
        if (!moved.count(t) || pos(x) >= pos(t)) continue;
        const auto& fx = facts[x];
        const auto& ft = facts[t];
        if (intersects(fx.writes, ft.reads) || intersects(fx.writes, ft.writes)) {
          if (x == plan.call) return block_it("moved write depends on the call");
          moved.insert(x);
          changed = true;
          break;
        }
      }
    }
  }
  std::size_t last_moved = 0;
  for (const Stmt* s : moved) last_moved = std::max<std::size_t>(last_moved, pos(s));
  for (const Stmt* s : after) {
    const auto& fs = facts[s];
    if (moved.count(s) && fs.external_call) return block_it("moved statement makes an external call");
    if (fs.early_exit && static_cast<std::size_t>(pos(s)) <= last_moved)
      return block_it("early exit between the call and a write");
  }

  for (const Stmt* s : window)
    if (moved.count(s)) plan.moved.push_back(s);

  // Dependences in the target order, w ahead of s.
  for (const Stmt* w : plan.moved) {
    for (const Stmt* s : window) {
      if (moved.count(s) || pos(s) >= pos(w)) continue;
      const auto& fw = facts[w];
      const auto& fs = facts[s];
      auto add = [&](const std::set<LocId>& x, const std::set<LocId>& y, analysis::DepKind k,
                     Action act) {
        for (LocId l : x)
          if (y.count(l)) plan.dependences.push_back({w, s, k, l, act});
      };
      add(fw.writes, fs.reads, analysis::DepKind::RAW, Action::IntroduceTemp);
      add(fw.reads, fs.writes, analysis::DepKind::WAR,
          s == plan.call ? Action::Blocked : Action::MovePair);
      add(fw.writes, fs.writes, analysis::DepKind::WAW,
          s == plan.call ? Action::Blocked : Action::MovePair);
      add(fw.reads, fs.reads, analysis::DepKind::RAR, Action::MoveSingle);
    }
  }
  for (const Stmt* w : plan.moved)
    if (!original_writes.count(w))
      for (const Stmt* t : plan.moved)
        if (t != w && pos(w) < pos(t))
          for (LocId l : facts[w].writes)
            if (facts[t].reads.count(l) || facts[t].writes.count(l))
              plan.dependences.push_back(
                  {t, w, facts[t].reads.count(l) ? analysis::DepKind::WAR : analysis::DepKind::WAW,
                   l, Action::MovePair});

  // Temporaries for every left-behind read of a location a moved statement
  // overwrites.
  const ContractDef* contract = a.unit.find_contract(f.site.contract);
  std::set<std::string> taken = taken_names(a.program, *contract);
  std::map<std::string, std::size_t> by_text;
  bool use_var = !a.unit.version().at_least(0, 5);
  for (const auto& d : plan.dependences) {
    if (d.action != Action::IntroduceTemp) continue;
    std::vector<const Expr*> reads;
    reads_of(*d.s, d.location, a, reads);
    if (reads.empty()) return block_it("location read through a call");
    for (const Expr* e : reads) {
      if (d.s != plan.call) {
        // The snapshot runs before the call; nothing between may change it.
        std::set<LocId> used = locations_read_by(*e, a);
        for (const Stmt* x : window) {
          if (x == d.s) break;
          if (!moved.count(x) && intersects(facts[x].writes, used))
            return block_it("snapshot would miss an intervening write");
        }
      }
      std::string text = print_expr(*e);
      auto found = by_text.find(text);
      if (found != by_text.end()) {
        auto& uses = plan.temps[found->second].uses;
        if (std::find(uses.begin(), uses.end(), e) == uses.end()) uses.push_back(e);
        continue;
      }
      sema::TypeRef t = a.program.type_of(*e);
      if (!t.is_value()) return block_it("cannot snapshot " + text);
      const VarDecl* root = a.program.root_var(*e);
      Temporary tmp;
      tmp.name = fresh_name((root ? root->name : std::string("value")) + "_temp", taken);
      tmp.type = use_var ? "" : type_text(t);
      if (!use_var && tmp.type.empty()) return block_it("cannot name the type of " + text);
      tmp.source = e;
      tmp.uses.push_back(e);
      by_text[text] = plan.temps.size();
      plan.temps.push_back(std::move(tmp));
    }
  }
  return plan;
}

EditScript apply_reorder(const ReorderPlan& plan, SourceUnit& unit) {
  if (plan.blocked) throw PlanBlocked(plan.reason);
  EditScript script;
  script.finding = plan.finding;
  script.pattern = Pattern::Reorder;
  auto edit = [&](EditKind k) {
    Edit e;
    e.kind = k;
    e.finding = plan.finding;
    return e;
  };
  for (const auto& t : plan.temps) {
    for (const Expr* use : t.uses) {
      Edit e = edit(EditKind::ReplaceExpr);
      e.target = use->id;
      e.name = t.name;
      e.expr = parse_expression(t.name, unit.ids);
      script.edits.push_back(std::move(e));
    }
  }
  for (const Stmt* s : plan.moved) {
    Edit e = edit(EditKind::MoveStatement);
    e.target = s->id;
    e.before = plan.call->id;
    script.edits.push_back(std::move(e));
  }
  NodeId first = plan.moved.empty() ? plan.call->id : plan.moved.front()->id;
  for (const auto& t : plan.temps) {
    Edit e = edit(EditKind::DeclareLocal);
    e.before = first;
    e.name = t.name;
    e.stmt = parse_statement((t.type.empty() ? std::string("var") : t.type) + " " + t.name + " = " +
                                 print_expr(*t.source) + ";",
                             unit.ids);
    script.edits.push_back(std::move(e));
  }
  return script;
}

// ---------------------------------------------------------------------------
// Driver

namespace {

const Finding* find_by_id(const std::vector<Finding>& fs, const std::string& id) {
  for (const auto& f : fs)
    if (f.id() == id) return &f;
  return nullptr;
}

/// Applies `script` to a copy of `unit`; the copy must print and re-parse.
std::optional<SourceUnit> try_apply(const EditScript& script, const SourceUnit& unit,
                                    std::string& error) {
  SourceUnit copy = unit.clone();
  try {
    apply(script, copy);
    std::string text = print(copy);
    parse(text, copy.path);
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
  return copy;
}

PatchOutcome outcome(const EditScript& s, const std::string& status, const std::string& note) {
  PatchOutcome o;
  o.finding = s.finding;
  o.pattern = to_string(s.pattern);
  o.edits = static_cast<int>(s.edits.size());
  o.gas = estimate_cost(s).delta;
  o.status = status;
  o.note = note;
  return o;
}

}  // namespace

PatchResult generate_patches(const SourceUnit& unit, const std::vector<Finding>& findings,
                             const PatchConfig& config) {
  PatchResult result;
  result.patched = unit.clone();
  std::map<std::string, std::string> locks;  // contract -> lock variable

  for (detect::VulnClass cls : detect::kAllClasses) {
    std::vector<const Finding*> todo;
    for (const auto& f : findings)
      if (f.cls == cls && f.fixable) todo.push_back(&f);
    std::stable_sort(todo.begin(), todo.end(), [](const Finding* x, const Finding* y) {
      return x->site.span.begin > y->site.span.begin;
    });
    for (const Finding* original : todo) {
      std::string id = original->id();
      SourceUnit& work = result.patched;
      UnitAnalysis a(work);
      auto current = detect::detect(a, config.detect);
      const Finding* f = find_by_id(current, id);
      if (!f) {
        PatchOutcome o;
        o.finding = id;
        o.status = "skipped";
        o.note = "no longer reported";
        result.outcomes.push_back(o);
        continue;
      }
      EditScript script;
      std::string note;
      try {
        switch (cls) {
          case detect::VulnClass::UnhandledException:
            script = fix_unhandled_exception(*f, a, work);
            break;
          case detect::VulnClass::MissingInputValidation:
            script = fix_missing_input_validation(*f, a, work);
            break;
          case detect::VulnClass::LockedEther: script = fix_locked_ether(*f, a, work); break;
          case detect::VulnClass::Reentrancy: {
            bool use_lock = config.force_lock;
            if (!use_lock) {
              ReorderPlan plan = plan_reorder(*f, a);
              if (plan.blocked) {
                use_lock = true;
                note = "reorder blocked: " + plan.reason;
              } else {
                script = apply_reorder(plan, work);
                std::string err;
                auto trial = try_apply(script, work, err);
                bool ok = false;
                if (trial) {
                  UnitAnalysis check(*trial);
                  ok = !find_by_id(detect::detect(check, config.detect), id);
                }
                if (!ok) {
                  use_lock = true;
                  note = "reorder did not remove the finding";
                }
              }
            } else {
              note = "lock forced by configuration";
            }
            if (use_lock) {
              auto it = locks.find(f->site.contract);
              bool declare = it == locks.end();
              if (declare) {
                std::set<std::string> taken =
                    taken_names(a.program, *a.unit.find_contract(f->site.contract));
                it = locks.emplace(f->site.contract, fresh_name("locked", taken)).first;
              }
              script = apply_lock(*f, a, work, it->second, declare);
              script.note = note;
            }
            break;
          }
        }
      } catch (const NotApplicable& e) {
        PatchOutcome o;
        o.finding = id;
        o.status = "skipped";
        o.note = e.what();
        result.outcomes.push_back(o);
        continue;
      }
      std::string err;
      auto next = try_apply(script, work, err);
      if (!next) {
        result.outcomes.push_back(outcome(script, "failed", err));
        if (script.pattern == Pattern::Lock && locks[f->site.contract] != "" &&
            std::any_of(script.edits.begin(), script.edits.end(),
                        [](const Edit& e) { return e.kind == EditKind::AddStateVar; }))
          locks.erase(f->site.contract);
        continue;
      }
      result.patched = std::move(*next);
      result.outcomes.push_back(outcome(script, "applied", script.note.empty() ? note : script.note));
      result.scripts.push_back(std::move(script));
    }
  }
  return result;
}

}  // namespace solfix::patch
