#include "solfix/semantics.hpp"

#include <set>

#include "solfix/ast_walk.hpp"

namespace solfix::sema {

using namespace ast;

const char* to_string(CallKind kind) {
  switch (kind) {
    case CallKind::Internal: return "internal";
    case CallKind::ExternalContract: return "external-contract";
    case CallKind::EtherSend: return "ether-transfer-send";
    case CallKind::EtherTransfer: return "ether-transfer-transfer";
    case CallKind::EtherCallValue: return "ether-transfer-call-value";
    case CallKind::Delegatecall: return "delegatecall";
  }
  return "internal";
}

bool is_builtin_function(const std::string& name) {
  static const std::set<std::string> kNames = {
      "require",   "assert",   "revert",   "keccak256", "sha3",     "sha256",
      "ripemd160", "ecrecover", "addmod",  "mulmod",    "selfdestruct", "suicide",
      "blockhash", "gasleft",  "type"};
  return kNames.count(name) > 0;
}

// ---------------------------------------------------------------------------
// ContractModel

ContractModel::ContractModel(const SourceUnit& unit, const ContractDef& def) : def_(&def) {
  std::set<std::string> seen;
  for (const ContractDef* c = &def; c;) {
    if (!seen.insert(c->name).second) break;
    chain_.push_back(c);
    if (c->bases.empty()) break;
    c = unit.find_contract(c->bases.front().name);
  }
  std::set<std::string> vars;
  for (auto it = chain_.rbegin(); it != chain_.rend(); ++it)
    for (const auto* v : (*it)->state_vars()) state_vars_.push_back(v);
  // Later (derived) declarations shadow earlier ones of the same name.
  std::vector<const StateVarDef*> filtered;
  for (auto it = state_vars_.rbegin(); it != state_vars_.rend(); ++it)
    if (vars.insert((*it)->var->name).second) filtered.push_back(*it);
  state_vars_.assign(filtered.rbegin(), filtered.rend());

  std::set<std::string> sigs;
  for (const auto* c : chain_) {
    for (const auto* f : c->functions()) {
      // Every level has its own constructor.
      if (f->is_constructor() && c != def_) continue;
      if (sigs.insert(f->signature()).second) functions_.push_back(f);
    }
    for (const auto& m : c->members)
      if (m->kind == MemberKind::Using)
        libraries_.push_back(static_cast<const UsingFor&>(*m).library);
  }
}

const StateVarDef* ContractModel::state_var(const std::string& name) const {
  for (const auto* v : state_vars_)
    if (v->var->name == name) return v;
  return nullptr;
}

const FunctionDef* ContractModel::function(const std::string& name, int arity) const {
  for (const auto* f : functions_) {
    if (f->function_kind != FunctionKind::Function || f->name != name) continue;
    if (arity < 0 || static_cast<int>(f->params.size()) == arity) return f;
  }
  if (arity >= 0) return function(name, -1);
  return nullptr;
}

const ModifierDef* ContractModel::modifier(const std::string& name) const {
  for (const auto* c : chain_)
    for (const auto* m : c->modifiers())
      if (m->name == name) return m;
  return nullptr;
}

const StructDef* ContractModel::struct_def(const std::string& name) const {
  for (const auto* c : chain_)
    for (const auto* s : c->structs())
      if (s->name == name) return s;
  return nullptr;
}

const EnumDef* ContractModel::enum_def(const std::string& name) const {
  for (const auto* c : chain_)
    for (const auto& m : c->members)
      if (m->kind == MemberKind::Enum && static_cast<const EnumDef&>(*m).name == name)
        return static_cast<const EnumDef*>(m.get());
  return nullptr;
}

bool ContractModel::has_event(const std::string& name) const {
  for (const auto* c : chain_)
    for (const auto& m : c->members)
      if (m->kind == MemberKind::Event && static_cast<const EventDef&>(*m).name == name)
        return true;
  return false;
}

const ContractDef* ContractModel::owner_of(const ContractMember& member) const {
  for (const auto* c : chain_)
    for (const auto& m : c->members)
      if (m.get() == &member) return c;
  return nullptr;
}

bool ContractModel::has_payable_entry() const {
  for (const auto* f : functions_)
    if (f->is_payable()) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Resolver

class Resolver {
public:
  Resolver(Program& p) : p_(p) {}

  void run() {
    for (const auto& model : p_.models_) {
      const ContractDef& c = model->def();
      model_ = model.get();
      contract_ = &c;
      for (const auto& m : c.members) {
        p_.owners_[m.get()] = &c;
        if (m->kind == MemberKind::StateVar) {
          const auto& sv = static_cast<const StateVarDef&>(*m);
          VarInfo vi;
          vi.decl = sv.var.get();
          vi.role = VarRole::State;
          vi.contract = &c;
          vi.location = DataLocation::Storage;
          vi.composite = p_.is_composite(p_.from_type_name(sv.var->type.get(), &c));
          p_.vars_[sv.var.get()] = vi;
        }
      }
    }
    for (const auto& model : p_.models_) {
      model_ = model.get();
      contract_ = &model->def();
      for (const auto& b : contract_->bases)
        for (const auto& a : b.args) expr(*a);
      for (const auto& m : contract_->members) member(*m);
    }
  }

private:
  void member(const ContractMember& m) {
    function_ = nullptr;
    modifier_ = nullptr;
    scopes_.clear();
    hoisted_.clear();
    switch (m.kind) {
      case MemberKind::StateVar: {
        const auto& sv = static_cast<const StateVarDef&>(m);
        if (sv.init) expr(*sv.init);
        type(sv.var->type.get());
        break;
      }
      case MemberKind::Function: {
        const auto& f = static_cast<const FunctionDef&>(m);
        function_ = &f;
        scopes_.emplace_back();
        for (const auto& d : f.params) declare(*d, VarRole::Param, nullptr);
        for (const auto& d : f.returns) declare(*d, VarRole::Return, nullptr);
        if (f.body) hoist(*f.body);
        for (const auto& inv : f.modifiers)
          for (const auto& a : inv.args) expr(*a);
        if (f.body) stmt(*f.body);
        break;
      }
      case MemberKind::Modifier: {
        const auto& md = static_cast<const ModifierDef&>(m);
        modifier_ = &md;
        scopes_.emplace_back();
        for (const auto& d : md.params) declare(*d, VarRole::ModifierParam, nullptr);
        if (md.body) {
          hoist(*md.body);
          stmt(*md.body);
        }
        break;
      }
      case MemberKind::Struct:
        for (const auto& f : static_cast<const StructDef&>(m).fields) type(f->type.get());
        break;
      default: break;
    }
  }

  // Pre-0.5 locals are visible in the whole function regardless of block.
  void hoist(const Stmt& body) {
    walk_stmt(body, [&](const Stmt& s) {
      if (s.kind != StmtKind::VarDecl) return;
      for (const auto& d : static_cast<const VarDeclStmt&>(s).decls)
        if (d && !d->name.empty() && !hoisted_.count(d->name)) hoisted_[d->name] = d.get();
    });
  }

  void declare(const VarDecl& d, VarRole role, const Expr* init) {
    type(d.type.get());
    VarInfo vi;
    vi.decl = &d;
    vi.role = role;
    vi.contract = contract_;
    vi.function = function_;
    vi.modifier = modifier_;
    vi.init = init;
    TypeRef t = d.type ? p_.from_type_name(d.type.get(), contract_)
                       : (init ? p_.type_of(*init) : TypeRef{});
    vi.composite = p_.is_composite(t);
    if (vi.composite) {
      if (d.location != DataLocation::Default) {
        vi.location = d.location;
      } else if (role == VarRole::Local) {
        // Old compilers default local composites to storage; a storage
        // initializer makes that a reference, anything else a memory copy.
        vi.location = init && p_.location_of(*init) == DataLocation::Storage
                          ? DataLocation::Storage
                          : DataLocation::Memory;
      } else if (function_ && function_->visibility == Visibility::External &&
                 role == VarRole::Param) {
        vi.location = DataLocation::Calldata;
      } else {
        vi.location = DataLocation::Memory;
      }
    }
    p_.vars_[&d] = vi;
    if (!d.name.empty() && !scopes_.empty()) scopes_.back()[d.name] = &d;
  }

  void type(const TypeName* t) {
    if (t && t->length) expr(*t->length);
    if (t && t->key) type(t->key.get());
    if (t && t->value) type(t->value.get());
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Block:
        scopes_.emplace_back();
        for (const auto& c : static_cast<const Block&>(s).statements) stmt(*c);
        scopes_.pop_back();
        return;
      case StmtKind::VarDecl: {
        const auto& v = static_cast<const VarDeclStmt&>(s);
        if (v.init) expr(*v.init);
        for (const auto& d : v.decls)
          if (d) declare(*d, VarRole::Local, v.tuple ? nullptr : v.init.get());
        return;
      }
      case StmtKind::For: {
        const auto& f = static_cast<const ForStmt&>(s);
        scopes_.emplace_back();
        if (f.init) stmt(*f.init);
        if (f.cond) expr(*f.cond);
        if (f.post) expr(*f.post);
        if (f.body) stmt(*f.body);
        scopes_.pop_back();
        return;
      }
      default: break;
    }
    direct_exprs(s, [&](const Expr& e) { expr(e); });
    child_stmts(s, [&](const Stmt& c) { stmt(c); });
  }

  void expr(const Expr& root) {
    walk_expr(root, [&](const Expr& e) {
      if (e.kind == ExprKind::Identifier) bind(static_cast<const Identifier&>(e));
      if (e.kind == ExprKind::New) type(static_cast<const NewExpr&>(e).type.get());
      if (e.kind == ExprKind::ElementaryType)
        type(static_cast<const ElementaryTypeExpr&>(e).type.get());
      return true;
    });
  }

  void bind(const Identifier& id) {
    Symbol s;
    s.name = id.name;
    s.contract = contract_;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(id.name);
      if (f != it->end()) {
        s.kind = SymbolKind::Variable;
        s.var = f->second;
        p_.symbols_[raw(id.id)] = s;
        return;
      }
    }
    if (auto h = hoisted_.find(id.name); h != hoisted_.end()) {
      s.kind = SymbolKind::Variable;
      s.var = h->second;
    } else if (const auto* sv = model_->state_var(id.name)) {
      s.kind = SymbolKind::Variable;
      s.var = sv->var.get();
    } else if (const auto* fn = model_->function(id.name)) {
      s.kind = SymbolKind::Function;
      s.function = fn;
    } else if (model_->struct_def(id.name)) {
      s.kind = SymbolKind::Struct;
    } else if (model_->enum_def(id.name)) {
      s.kind = SymbolKind::Enum;
    } else if (model_->has_event(id.name)) {
      s.kind = SymbolKind::Event;
    } else if (model_->modifier(id.name)) {
      s.kind = SymbolKind::Modifier;
    } else if (const auto* c = p_.unit().find_contract(id.name)) {
      s.kind = SymbolKind::Contract;
      s.contract = c;
    } else if (id.name == "super" && model_->chain().size() > 1) {
      s.kind = SymbolKind::Contract;
      s.contract = model_->chain()[1];
    } else {
      s.kind = SymbolKind::Builtin;
    }
    p_.symbols_[raw(id.id)] = s;
  }

  Program& p_;
  const ContractModel* model_ = nullptr;
  const ContractDef* contract_ = nullptr;
  const FunctionDef* function_ = nullptr;
  const ModifierDef* modifier_ = nullptr;
  std::vector<std::unordered_map<std::string, const VarDecl*>> scopes_;
  std::unordered_map<std::string, const VarDecl*> hoisted_;
};

// ---------------------------------------------------------------------------
// Program

Program::Program(const SourceUnit& unit) : unit_(&unit) {
  for (const auto& c : unit.contracts) models_.push_back(std::make_unique<ContractModel>(unit, *c));
  Resolver(*this).run();
}

const ContractModel* Program::model(const ContractDef& def) const {
  for (const auto& m : models_)
    if (&m->def() == &def) return m.get();
  return nullptr;
}

const ContractModel* Program::model(const std::string& name) const {
  for (const auto& m : models_)
    if (m->def().name == name) return m.get();
  return nullptr;
}

const Symbol* Program::symbol(const Identifier& id) const {
  auto it = symbols_.find(raw(id.id));
  return it == symbols_.end() ? nullptr : &it->second;
}

const VarDecl* Program::var_of(const Expr& e) const {
  const Expr* s = strip_parens(&e);
  if (!s || s->kind != ExprKind::Identifier) return nullptr;
  const Symbol* sym = symbol(static_cast<const Identifier&>(*s));
  return sym && sym->kind == SymbolKind::Variable ? sym->var : nullptr;
}

const VarInfo* Program::info(const VarDecl* decl) const {
  auto it = vars_.find(decl);
  return it == vars_.end() ? nullptr : &it->second;
}

const ContractDef* Program::owner(const ContractMember& m) const {
  auto it = owners_.find(&m);
  return it == owners_.end() ? nullptr : it->second;
}

namespace {

std::string canonical_elementary(const std::string& n) {
  if (n == "uint") return "uint256";
  if (n == "int") return "int256";
  if (n == "byte") return "bytes1";
  return n;
}

TypeRef elementary(const std::string& n) {
  TypeRef t;
  t.kind = TypeRef::Kind::Elementary;
  t.name = canonical_elementary(n);
  return t;
}

}  // namespace

TypeRef Program::from_type_name(const TypeName* tn, const ContractDef* scope) const {
  TypeRef t;
  if (!tn) return t;
  t.node = tn;
  t.scope = scope;
  switch (tn->kind) {
    case TypeKind::Elementary: {
      TypeRef e = elementary(tn->name);
      e.node = tn;
      e.scope = scope;
      return e;
    }
    case TypeKind::Mapping: t.kind = TypeRef::Kind::Mapping; return t;
    case TypeKind::Array: t.kind = TypeRef::Kind::Array; return t;
    case TypeKind::UserDefined: break;
  }
  std::string name = tn->name;
  const ContractModel* m = scope ? model(*scope) : nullptr;
  if (auto dot = name.find('.'); dot != std::string::npos) {
    m = model(name.substr(0, dot));
    name = name.substr(dot + 1);
  }
  t.name = name;
  if (m && m->struct_def(name)) {
    t.kind = TypeRef::Kind::Struct;
    t.scope = &m->def();
  } else if (m && m->enum_def(name)) {
    t.kind = TypeRef::Kind::Enum;
  } else if (unit_->find_contract(name)) {
    t.kind = TypeRef::Kind::Contract;
  } else {
    // Struct declared in some other contract of the unit.
    for (const auto& other : models_) {
      if (other->struct_def(name)) {
        t.kind = TypeRef::Kind::Struct;
        t.scope = &other->def();
        return t;
      }
    }
    t.kind = TypeRef::Kind::Unknown;
  }
  return t;
}

TypeRef Program::type_of(const VarDecl& d) const {
  const VarInfo* vi = info(&d);
  if (d.type) return from_type_name(d.type.get(), vi ? vi->contract : nullptr);
  if (vi && vi->init) return type_of(*vi->init);
  return {};
}

bool Program::is_composite(const TypeRef& t) const {
  switch (t.kind) {
    case TypeRef::Kind::Struct:
    case TypeRef::Kind::Mapping:
    case TypeRef::Kind::Array:
      return true;
    case TypeRef::Kind::Elementary: return t.name == "string" || t.name == "bytes";
    default: return false;
  }
}

TypeRef Program::type_of(const Expr& e) const {
  using K = TypeRef::Kind;
  switch (e.kind) {
    case ExprKind::Identifier: {
      const auto& id = static_cast<const Identifier&>(e);
      const Symbol* s = symbol(id);
      TypeRef t;
      if (!s) return t;
      switch (s->kind) {
        case SymbolKind::Variable: return type_of(*s->var);
        case SymbolKind::Function:
          t.kind = K::Function;
          t.function = s->function;
          t.scope = s->contract;
          return t;
        case SymbolKind::Contract:
          t.kind = K::TypeExpr;
          t.name = s->contract->name;
          return t;
        case SymbolKind::Struct:
        case SymbolKind::Enum:
          t.kind = K::TypeExpr;
          t.name = id.name;
          t.scope = s->contract;
          return t;
        case SymbolKind::Builtin:
          if (id.name == "this") {
            t.kind = K::Contract;
            t.name = s->contract ? s->contract->name : "";
            return t;
          }
          if (id.name == "now") return elementary("uint256");
          if (id.name == "msg" || id.name == "block" || id.name == "tx" || id.name == "abi") {
            t.kind = K::Magic;
            t.name = id.name;
          }
          return t;
        default: return t;
      }
    }
    case ExprKind::Literal: {
      const auto& l = static_cast<const Literal&>(e);
      if (l.literal == LiteralKind::Bool) return elementary("bool");
      if (l.literal == LiteralKind::Number) return elementary("uint256");
      return elementary("string");
    }
    case ExprKind::ElementaryType: {
      TypeRef t;
      t.kind = K::TypeExpr;
      t.name = canonical_elementary(static_cast<const ElementaryTypeExpr&>(e).type->name);
      return t;
    }
    case ExprKind::Member: {
      const auto& m = static_cast<const MemberAccess&>(e);
      TypeRef base = type_of(*m.base);
      const std::string& n = m.member;
      switch (base.kind) {
        case K::Magic:
          if (base.name == "msg") {
            if (n == "sender") return elementary("address");
            if (n == "value" || n == "gas") return elementary("uint256");
            if (n == "data") return elementary("bytes");
            if (n == "sig") return elementary("bytes4");
          } else if (base.name == "block") {
            if (n == "coinbase") return elementary("address");
            if (n == "blockhash") return {};
            return elementary("uint256");
          } else if (base.name == "tx") {
            if (n == "origin") return elementary("address");
            return elementary("uint256");
          }
          return {};
        case K::Struct: {
          const ContractModel* cm = base.scope ? model(*base.scope) : nullptr;
          const StructDef* sd = cm ? cm->struct_def(base.name) : nullptr;
          if (sd)
            for (const auto& f : sd->fields)
              if (f->name == n) return from_type_name(f->type.get(), base.scope);
          return {};
        }
        case K::Elementary:
          if (n == "balance") return elementary("uint256");
          if (n == "length") return elementary("uint256");
          break;
        case K::Array:
          if (n == "length") return elementary("uint256");
          break;
        case K::Contract: {
          const ContractModel* cm = model(base.name);
          TypeRef t;
          if (cm) {
            if (const auto* f = cm->function(n)) {
              t.kind = K::Function;
              t.function = f;
              t.scope = &cm->def();
              return t;
            }
            if (cm->state_var(n)) {
              t.kind = K::Function;
              t.scope = &cm->def();
              return t;
            }
          }
          if (n == "balance") return elementary("uint256");
          return t;
        }
        case K::TypeExpr: {
          const ContractModel* cm = model(base.name);
          if (cm) {
            TypeRef t;
            if (const auto* f = cm->function(n)) {
              t.kind = K::Function;
              t.function = f;
              t.scope = &cm->def();
            } else if (cm->struct_def(n) || cm->enum_def(n)) {
              t.kind = K::TypeExpr;
              t.name = n;
              t.scope = &cm->def();
            }
            return t;
          }
          if (base.scope) {
            const ContractModel* sm = model(*base.scope);
            if (sm && sm->enum_def(base.name)) {
              TypeRef t;
              t.kind = K::Enum;
              t.name = base.name;
              t.scope = base.scope;
              return t;
            }
          }
          return {};
        }
        default: break;
      }
      return {};
    }
    case ExprKind::Index: {
      const auto& x = static_cast<const IndexAccess&>(e);
      TypeRef base = type_of(*x.base);
      if ((base.kind == K::Mapping || base.kind == K::Array) && base.node && base.node->value)
        return from_type_name(base.node->value.get(), base.scope);
      if (base.kind == K::Elementary && (base.name == "bytes" || base.name.rfind("bytes", 0) == 0))
        return elementary("bytes1");
      return {};
    }
    case ExprKind::Call: {
      const auto& c = static_cast<const FunctionCall&>(e);
      const Expr* callee = strip_parens(c.callee.get());
      if (!callee) return {};
      TypeRef ct = type_of(*callee);
      if (ct.kind == K::TypeExpr) {
        if (ct.name.empty()) return {};
        if (unit_->find_contract(ct.name)) {
          TypeRef t;
          t.kind = K::Contract;
          t.name = ct.name;
          return t;
        }
        if (ct.scope) {
          const ContractModel* cm = model(*ct.scope);
          if (cm && cm->struct_def(ct.name)) {
            TypeRef t;
            t.kind = K::Struct;
            t.name = ct.name;
            t.scope = ct.scope;
            return t;
          }
          if (cm && cm->enum_def(ct.name)) {
            TypeRef t;
            t.kind = K::Enum;
            t.name = ct.name;
            return t;
          }
        }
        return elementary(ct.name == "payable" ? "address" : ct.name);
      }
      if (ct.kind == K::Function) {
        if (ct.function && !ct.function->returns.empty())
          return from_type_name(ct.function->returns.front()->type.get(), ct.scope);
        return {};
      }
      CallInfo ci = classify(c);
      if (ci.kind == CallKind::EtherSend || ci.kind == CallKind::EtherCallValue ||
          ci.kind == CallKind::Delegatecall || ci.low_level)
        return elementary("bool");
      if (callee->kind == ExprKind::Identifier) {
        const auto& n = static_cast<const Identifier&>(*callee).name;
        if (n == "keccak256" || n == "sha3" || n == "sha256" || n == "blockhash")
          return elementary("bytes32");
        if (n == "ecrecover") return elementary("address");
        if (n == "addmod" || n == "mulmod" || n == "gasleft") return elementary("uint256");
      }
      return {};
    }
    case ExprKind::CallOptions: return {};
    case ExprKind::Unary: {
      const auto& u = static_cast<const UnaryOp&>(e);
      if (u.op == "!") return elementary("bool");
      return type_of(*u.operand);
    }
    case ExprKind::Binary: {
      const auto& b = static_cast<const BinaryOp&>(e);
      static const std::set<std::string> kBool = {"==", "!=", "<", ">", "<=", ">=", "&&", "||"};
      if (kBool.count(b.op)) return elementary("bool");
      return type_of(*b.lhs);
    }
    case ExprKind::Assign: return type_of(*static_cast<const Assignment&>(e).lhs);
    case ExprKind::Conditional: return type_of(*static_cast<const Conditional&>(e).then);
    case ExprKind::Tuple: {
      const auto& t = static_cast<const TupleExpr&>(e);
      if (t.elements.size() == 1 && t.elements[0]) return type_of(*t.elements[0]);
      return {};
    }
    case ExprKind::New: {
      const auto& n = static_cast<const NewExpr&>(e);
      TypeRef t = from_type_name(n.type.get(), nullptr);
      if (t.kind == K::Contract) {
        t.kind = K::TypeExpr;
      }
      return t;
    }
    case ExprKind::InlineArray: return {};
  }
  return {};
}

const VarDecl* Program::root_var(const Expr& e) const {
  const Expr* cur = &e;
  while (cur) {
    switch (cur->kind) {
      case ExprKind::Identifier: return var_of(*cur);
      case ExprKind::Member: cur = static_cast<const MemberAccess*>(cur)->base.get(); break;
      case ExprKind::Index: cur = static_cast<const IndexAccess*>(cur)->base.get(); break;
      case ExprKind::Tuple: {
        const Expr* inner = strip_parens(cur);
        if (inner == cur) return nullptr;
        cur = inner;
        break;
      }
      default: return nullptr;
    }
  }
  return nullptr;
}

DataLocation Program::location_of(const Expr& e) const {
  const Expr* s = strip_parens(&e);
  if (!s) return DataLocation::Default;
  if (s->kind == ExprKind::Identifier || s->kind == ExprKind::Member ||
      s->kind == ExprKind::Index) {
    const VarDecl* v = root_var(*s);
    if (!v) return DataLocation::Default;
    const VarInfo* vi = info(v);
    if (!vi) return DataLocation::Default;
    if (vi->role == VarRole::State) return DataLocation::Storage;
    return vi->location;
  }
  if (s->kind == ExprKind::Call || s->kind == ExprKind::New || s->kind == ExprKind::InlineArray)
    return is_composite(type_of(*s)) ? DataLocation::Memory : DataLocation::Default;
  return DataLocation::Default;
}

CallInfo Program::classify(const FunctionCall& call) const {
  CallInfo ci;
  const Expr* callee = strip_parens(call.callee.get());
  if (!callee) return ci;

  // `callee{value: v}(...)`
  if (callee->kind == ExprKind::CallOptions) {
    const auto& o = static_cast<const CallOptions&>(*callee);
    const Expr* inner = strip_parens(o.callee.get());
    const Expr* value = nullptr;
    for (std::size_t i = 0; i < o.names.size(); ++i)
      if (o.names[i] == "value") value = o.values[i].get();
    if (inner && inner->kind == ExprKind::Member) {
      const auto& m = static_cast<const MemberAccess&>(*inner);
      ci.receiver = m.base.get();
      if (m.member == "call") {
        ci.kind = value ? CallKind::EtherCallValue : CallKind::ExternalContract;
        ci.low_level = !value;
        ci.value = value;
        return ci;
      }
      if (m.member == "delegatecall" || m.member == "callcode") {
        ci.kind = CallKind::Delegatecall;
        return ci;
      }
    }
    ci.kind = CallKind::ExternalContract;
    ci.value = value;
    return ci;
  }

  if (callee->kind == ExprKind::Identifier) {
    const auto& id = static_cast<const Identifier&>(*callee);
    const Symbol* s = symbol(id);
    if (s && s->kind == SymbolKind::Function) {
      ci.callee = s->function;
      return ci;
    }
    if (s && s->kind == SymbolKind::Variable) {
      ci.kind = CallKind::ExternalContract;
      ci.low_confidence = true;
      return ci;
    }
    ci.builtin = id.name;
    return ci;
  }
  if (callee->kind == ExprKind::ElementaryType || callee->kind == ExprKind::New) {
    ci.builtin = callee->kind == ExprKind::New ? "new" : "conversion";
    return ci;
  }
  // Invocation of a configured call: `x.call.value(v).gas(g)(...)`.
  if (callee->kind == ExprKind::Call) {
    const Expr* cur = callee;
    const Expr* value = nullptr;
    while (cur && cur->kind == ExprKind::Call) {
      const auto& inner = static_cast<const FunctionCall&>(*cur);
      const Expr* ic = strip_parens(inner.callee.get());
      if (!ic || ic->kind != ExprKind::Member) break;
      const auto& im = static_cast<const MemberAccess&>(*ic);
      if (im.member != "value" && im.member != "gas") break;
      if (im.member == "value" && !inner.args.empty() && !value) value = inner.args[0].get();
      cur = strip_parens(im.base.get());
    }
    ci.kind = CallKind::ExternalContract;
    if (cur && cur->kind == ExprKind::Member) {
      const auto& root = static_cast<const MemberAccess&>(*cur);
      ci.receiver = root.base.get();
      ci.value = value;
      if (root.member == "call") {
        ci.kind = value ? CallKind::EtherCallValue : CallKind::ExternalContract;
        ci.low_level = !value;
      } else if (root.member == "delegatecall" || root.member == "callcode") {
        ci.kind = CallKind::Delegatecall;
      }
      return ci;
    }
    ci.low_confidence = true;
    return ci;
  }
  if (callee->kind != ExprKind::Member) {
    ci.kind = CallKind::ExternalContract;
    ci.low_confidence = true;
    return ci;
  }

  const auto& m = static_cast<const MemberAccess&>(*callee);
  const Expr* base = strip_parens(m.base.get());
  ci.receiver = base;
  const std::string& name = m.member;
  TypeRef bt = base ? type_of(*base) : TypeRef{};
  using K = TypeRef::Kind;

  // Setter in a chain: the `x.call.value(v)` part of `x.call.value(v)()`.
  if ((name == "value" || name == "gas") && base) {
    bool low_level_member =
        base->kind == ExprKind::Member &&
        (static_cast<const MemberAccess&>(*base).member == "call" ||
         static_cast<const MemberAccess&>(*base).member == "delegatecall" ||
         static_cast<const MemberAccess&>(*base).member == "callcode");
    if (low_level_member || bt.kind == K::Function || base->kind == ExprKind::Call) {
      ci.option_setter = true;
      ci.builtin = name;
      return ci;
    }
  }

  if (name == "call") {
    ci.kind = CallKind::ExternalContract;
    ci.low_level = true;
    return ci;
  }
  if (name == "delegatecall" || name == "callcode") {
    ci.kind = CallKind::Delegatecall;
    return ci;
  }

  // Library-qualified, `super.` and base-qualified calls run in this context.
  if (bt.kind == K::TypeExpr) {
    if (const ContractModel* cm = model(bt.name)) ci.callee = cm->function(name, static_cast<int>(call.args.size()));
    ci.builtin = ci.callee ? "" : "type-member";
    return ci;
  }
  if (base && base->kind == ExprKind::Identifier &&
      static_cast<const Identifier&>(*base).name == "this") {
    const Symbol* s = symbol(static_cast<const Identifier&>(*base));
    const ContractModel* cm = s && s->contract ? model(*s->contract) : nullptr;
    if (cm) ci.callee = cm->function(name, static_cast<int>(call.args.size()));
    if (ci.callee) return ci;
  }
  if (bt.kind == K::Magic) {
    ci.builtin = bt.name + "." + name;
    return ci;
  }

  bool address_like = bt.is_address() || bt.kind == K::Unknown;
  if (name == "send" && call.args.size() == 1 && address_like) {
    ci.kind = CallKind::EtherSend;
    ci.value = call.args[0].get();
    ci.low_confidence = bt.kind == K::Unknown;
    return ci;
  }
  if (name == "transfer" && call.args.size() == 1 && address_like) {
    ci.kind = CallKind::EtherTransfer;
    ci.value = call.args[0].get();
    ci.low_confidence = bt.kind == K::Unknown;
    return ci;
  }

  if (bt.kind == K::Contract) {
    ci.kind = CallKind::ExternalContract;
    return ci;
  }
  if (bt.kind == K::Array || (bt.kind == K::Elementary && bt.name == "bytes")) {
    if (name == "push" || name == "pop") {
      ci.builtin = name;
      return ci;
    }
  }

  // `using L for T`: `x.f(a)` calls L.f(x, a).
  const Symbol* base_sym = nullptr;
  const Expr* root = base;
  while (root && (root->kind == ExprKind::Member || root->kind == ExprKind::Index))
    root = strip_parens(root->kind == ExprKind::Member
                            ? static_cast<const MemberAccess*>(root)->base.get()
                            : static_cast<const IndexAccess*>(root)->base.get());
  if (root && root->kind == ExprKind::Identifier)
    base_sym = symbol(static_cast<const Identifier&>(*root));
  const ContractDef* scope = base_sym ? base_sym->contract : nullptr;
  if (const ContractModel* cm = scope ? model(*scope) : nullptr) {
    for (const auto& lib : cm->using_libraries()) {
      const ContractModel* lm = model(lib);
      if (const FunctionDef* f = lm ? lm->function(name, static_cast<int>(call.args.size()) + 1) : nullptr) {
        ci.callee = f;
        return ci;
      }
    }
  }
  if (bt.kind == K::Elementary && !bt.is_address()) {
    ci.builtin = "using-for";
    return ci;
  }
  if (bt.kind == K::Struct || bt.kind == K::Mapping || bt.kind == K::Array) {
    ci.builtin = "using-for";
    return ci;
  }

  ci.kind = CallKind::ExternalContract;
  ci.low_confidence = bt.kind == K::Unknown;
  return ci;
}

}  // namespace solfix::sema
