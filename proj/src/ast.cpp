#include "solfix/ast.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace solfix::ast {

const char* to_string(DataLocation loc) {
  switch (loc) {
    case DataLocation::Default: return "default";
    case DataLocation::Storage: return "storage";
    case DataLocation::Memory: return "memory";
    case DataLocation::Calldata: return "calldata";
  }
  return "default";
}

const char* to_string(Visibility vis) {
  switch (vis) {
    case Visibility::Default: return "default";
    case Visibility::Public: return "public";
    case Visibility::External: return "external";
    case Visibility::Internal: return "internal";
    case Visibility::Private: return "private";
  }
  return "default";
}

const char* to_string(Mutability mut) {
  switch (mut) {
    case Mutability::NonPayable: return "nonpayable";
    case Mutability::Payable: return "payable";
    case Mutability::View: return "view";
    case Mutability::Pure: return "pure";
    case Mutability::Constant: return "constant";
  }
  return "nonpayable";
}

const char* to_string(ContractKind kind) {
  switch (kind) {
    case ContractKind::Contract: return "contract";
    case ContractKind::Library: return "library";
    case ContractKind::Interface: return "interface";
  }
  return "contract";
}

namespace {

template <typename T>
std::unique_ptr<T> clone_ptr(const std::unique_ptr<T>& p) {
  return p ? p->clone() : nullptr;
}

std::unique_ptr<Expr> clone_expr(const ExprPtr& p) { return p ? p->clone() : nullptr; }
std::unique_ptr<Stmt> clone_stmt(const StmtPtr& p) { return p ? p->clone() : nullptr; }

std::vector<ExprPtr> clone_exprs(const std::vector<ExprPtr>& v) {
  std::vector<ExprPtr> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(clone_expr(e));
  return out;
}

std::vector<VarDeclPtr> clone_decls(const std::vector<VarDeclPtr>& v) {
  std::vector<VarDeclPtr> out;
  out.reserve(v.size());
  for (const auto& d : v) out.push_back(d ? d->clone() : nullptr);
  return out;
}

template <typename T>
void copy_header(T& dst, const T& src) {
  dst.id = src.id;
  dst.span = src.span;
}

}  // namespace

// ---------------------------------------------------------------------------

TypeName::TypeName() = default;
TypeName::~TypeName() = default;
TypeName::TypeName(TypeName&&) noexcept = default;
TypeName& TypeName::operator=(TypeName&&) noexcept = default;

std::unique_ptr<TypeName> TypeName::clone() const {
  auto t = std::make_unique<TypeName>();
  t->id = id;
  t->span = span;
  t->kind = kind;
  t->name = name;
  t->payable = payable;
  t->key = clone_ptr(key);
  t->value = clone_ptr(value);
  t->length = clone_expr(length);
  return t;
}

bool TypeName::is_integer() const {
  if (kind != TypeKind::Elementary) return false;
  return name.rfind("uint", 0) == 0 || name.rfind("int", 0) == 0;
}

bool TypeName::is_composite() const {
  switch (kind) {
    case TypeKind::Mapping:
    case TypeKind::Array:
      return true;
    case TypeKind::Elementary:
      return name == "string" || name == "bytes";
    case TypeKind::UserDefined:
      // Structs are composite; contract and enum types are value types.
      // Callers with symbol information refine this.
      return false;
  }
  return false;
}

TypePtr make_elementary(std::string name, NodeId id, Span span) {
  auto t = std::make_unique<TypeName>();
  t->id = id;
  t->span = span;
  t->kind = TypeKind::Elementary;
  t->name = std::move(name);
  return t;
}

// ---------------------------------------------------------------------------

ExprPtr Identifier::clone() const {
  auto e = std::make_unique<Identifier>();
  copy_header(*e, *this);
  e->name = name;
  return e;
}

ExprPtr Literal::clone() const {
  auto e = std::make_unique<Literal>();
  copy_header(*e, *this);
  e->literal = literal;
  e->text = text;
  e->unit = unit;
  return e;
}

ExprPtr ElementaryTypeExpr::clone() const {
  auto e = std::make_unique<ElementaryTypeExpr>();
  copy_header(*e, *this);
  e->type = clone_ptr(type);
  return e;
}

ExprPtr MemberAccess::clone() const {
  auto e = std::make_unique<MemberAccess>();
  copy_header(*e, *this);
  e->base = clone_expr(base);
  e->member = member;
  return e;
}

ExprPtr IndexAccess::clone() const {
  auto e = std::make_unique<IndexAccess>();
  copy_header(*e, *this);
  e->base = clone_expr(base);
  e->index = clone_expr(index);
  return e;
}

ExprPtr FunctionCall::clone() const {
  auto e = std::make_unique<FunctionCall>();
  copy_header(*e, *this);
  e->callee = clone_expr(callee);
  e->args = clone_exprs(args);
  e->arg_names = arg_names;
  return e;
}

ExprPtr CallOptions::clone() const {
  auto e = std::make_unique<CallOptions>();
  copy_header(*e, *this);
  e->callee = clone_expr(callee);
  e->names = names;
  e->values = clone_exprs(values);
  return e;
}

ExprPtr UnaryOp::clone() const {
  auto e = std::make_unique<UnaryOp>();
  copy_header(*e, *this);
  e->op = op;
  e->prefix = prefix;
  e->operand = clone_expr(operand);
  return e;
}

ExprPtr BinaryOp::clone() const {
  auto e = std::make_unique<BinaryOp>();
  copy_header(*e, *this);
  e->op = op;
  e->lhs = clone_expr(lhs);
  e->rhs = clone_expr(rhs);
  return e;
}

ExprPtr Assignment::clone() const {
  auto e = std::make_unique<Assignment>();
  copy_header(*e, *this);
  e->op = op;
  e->lhs = clone_expr(lhs);
  e->rhs = clone_expr(rhs);
  return e;
}

ExprPtr Conditional::clone() const {
  auto e = std::make_unique<Conditional>();
  copy_header(*e, *this);
  e->cond = clone_expr(cond);
  e->then = clone_expr(then);
  e->otherwise = clone_expr(otherwise);
  return e;
}

ExprPtr TupleExpr::clone() const {
  auto e = std::make_unique<TupleExpr>();
  copy_header(*e, *this);
  e->elements = clone_exprs(elements);
  return e;
}

ExprPtr NewExpr::clone() const {
  auto e = std::make_unique<NewExpr>();
  copy_header(*e, *this);
  e->type = clone_ptr(type);
  return e;
}

ExprPtr InlineArray::clone() const {
  auto e = std::make_unique<InlineArray>();
  copy_header(*e, *this);
  e->elements = clone_exprs(elements);
  return e;
}

// ---------------------------------------------------------------------------

std::unique_ptr<VarDecl> VarDecl::clone() const {
  auto d = std::make_unique<VarDecl>();
  d->id = id;
  d->span = span;
  d->type = clone_ptr(type);
  d->location = location;
  d->name = name;
  d->indexed = indexed;
  return d;
}

StmtPtr Block::clone() const { return clone_block(); }

std::unique_ptr<Block> Block::clone_block() const {
  auto s = std::make_unique<Block>();
  copy_header(*s, *this);
  for (const auto& st : statements) s->statements.push_back(clone_stmt(st));
  return s;
}

StmtPtr VarDeclStmt::clone() const {
  auto s = std::make_unique<VarDeclStmt>();
  copy_header(*s, *this);
  s->decls = clone_decls(decls);
  s->tuple = tuple;
  s->init = clone_expr(init);
  return s;
}

StmtPtr ExprStmt::clone() const {
  auto s = std::make_unique<ExprStmt>();
  copy_header(*s, *this);
  s->expr = clone_expr(expr);
  return s;
}

StmtPtr IfStmt::clone() const {
  auto s = std::make_unique<IfStmt>();
  copy_header(*s, *this);
  s->cond = clone_expr(cond);
  s->then = clone_stmt(then);
  s->otherwise = clone_stmt(otherwise);
  return s;
}

StmtPtr ForStmt::clone() const {
  auto s = std::make_unique<ForStmt>();
  copy_header(*s, *this);
  s->init = clone_stmt(init);
  s->cond = clone_expr(cond);
  s->post = clone_expr(post);
  s->body = clone_stmt(body);
  return s;
}

StmtPtr WhileStmt::clone() const {
  auto s = std::make_unique<WhileStmt>();
  copy_header(*s, *this);
  s->cond = clone_expr(cond);
  s->body = clone_stmt(body);
  return s;
}

StmtPtr DoWhileStmt::clone() const {
  auto s = std::make_unique<DoWhileStmt>();
  copy_header(*s, *this);
  s->body = clone_stmt(body);
  s->cond = clone_expr(cond);
  return s;
}

StmtPtr ReturnStmt::clone() const {
  auto s = std::make_unique<ReturnStmt>();
  copy_header(*s, *this);
  s->value = clone_expr(value);
  return s;
}

StmtPtr EmitStmt::clone() const {
  auto s = std::make_unique<EmitStmt>();
  copy_header(*s, *this);
  s->call = clone_expr(call);
  return s;
}

StmtPtr SimpleStmt::clone() const {
  auto s = std::make_unique<SimpleStmt>(kind);
  copy_header(*s, *this);
  return s;
}

// ---------------------------------------------------------------------------

MemberPtr StateVarDef::clone() const {
  auto m = std::make_unique<StateVarDef>();
  copy_header(*m, *this);
  m->var = var->clone();
  m->visibility = visibility;
  m->constant = constant;
  m->immutable = immutable;
  m->init = clone_expr(init);
  return m;
}

ModifierInvocation ModifierInvocation::clone() const {
  ModifierInvocation m;
  m.id = id;
  m.span = span;
  m.name = name;
  m.has_args = has_args;
  m.args = clone_exprs(args);
  return m;
}

MemberPtr FunctionDef::clone() const {
  auto f = std::make_unique<FunctionDef>();
  copy_header(*f, *this);
  f->function_kind = function_kind;
  f->name = name;
  f->legacy_form = legacy_form;
  f->params = clone_decls(params);
  f->returns = clone_decls(returns);
  f->has_returns = has_returns;
  f->visibility = visibility;
  f->mutability = mutability;
  f->is_virtual = is_virtual;
  f->overrides = overrides;
  for (const auto& m : modifiers) f->modifiers.push_back(m.clone());
  f->body = body ? body->clone_block() : nullptr;
  return f;
}

std::string FunctionDef::display_name() const {
  switch (function_kind) {
    case FunctionKind::Constructor: return "constructor";
    case FunctionKind::Fallback: return "fallback";
    case FunctionKind::Receive: return "receive";
    case FunctionKind::Function: break;
  }
  return name;
}

namespace {
std::string type_signature(const TypeName* t) {
  if (!t) return "var";
  switch (t->kind) {
    case TypeKind::Elementary:
      if (t->name == "uint") return "uint256";
      if (t->name == "int") return "int256";
      if (t->name == "byte") return "bytes1";
      return t->name;
    case TypeKind::UserDefined: return t->name;
    case TypeKind::Mapping:
      return "mapping(" + type_signature(t->key.get()) + "=>" + type_signature(t->value.get()) + ")";
    case TypeKind::Array: return type_signature(t->value.get()) + "[]";
  }
  return "?";
}
}  // namespace

std::string FunctionDef::signature() const {
  std::string out = display_name() + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ",";
    out += type_signature(params[i]->type.get());
  }
  return out + ")";
}

MemberPtr ModifierDef::clone() const {
  auto m = std::make_unique<ModifierDef>();
  copy_header(*m, *this);
  m->name = name;
  m->has_params = has_params;
  m->params = clone_decls(params);
  m->is_virtual = is_virtual;
  m->overrides = overrides;
  m->body = body ? body->clone_block() : nullptr;
  return m;
}

MemberPtr StructDef::clone() const {
  auto m = std::make_unique<StructDef>();
  copy_header(*m, *this);
  m->name = name;
  m->fields = clone_decls(fields);
  return m;
}

MemberPtr EnumDef::clone() const {
  auto m = std::make_unique<EnumDef>();
  copy_header(*m, *this);
  m->name = name;
  m->values = values;
  return m;
}

MemberPtr EventDef::clone() const {
  auto m = std::make_unique<EventDef>();
  copy_header(*m, *this);
  m->name = name;
  m->params = clone_decls(params);
  m->anonymous = anonymous;
  return m;
}

MemberPtr UsingFor::clone() const {
  auto m = std::make_unique<UsingFor>();
  copy_header(*m, *this);
  m->library = library;
  m->type = clone_ptr(type);
  return m;
}

InheritanceSpec InheritanceSpec::clone() const {
  InheritanceSpec s;
  s.id = id;
  s.span = span;
  s.name = name;
  s.has_args = has_args;
  s.args = clone_exprs(args);
  return s;
}

// ---------------------------------------------------------------------------

std::unique_ptr<ContractDef> ContractDef::clone() const {
  auto c = std::make_unique<ContractDef>();
  c->id = id;
  c->span = span;
  c->kind = kind;
  c->is_abstract = is_abstract;
  c->name = name;
  for (const auto& b : bases) c->bases.push_back(b.clone());
  for (const auto& m : members) c->members.push_back(m->clone());
  return c;
}

namespace {
template <typename T, MemberKind K, typename Members>
std::vector<const T*> members_of(const Members& members) {
  std::vector<const T*> out;
  for (const auto& m : members)
    if (m->kind == K) out.push_back(static_cast<const T*>(m.get()));
  return out;
}
}  // namespace

std::vector<const StateVarDef*> ContractDef::state_vars() const {
  return members_of<StateVarDef, MemberKind::StateVar>(members);
}
std::vector<const FunctionDef*> ContractDef::functions() const {
  return members_of<FunctionDef, MemberKind::Function>(members);
}
std::vector<const ModifierDef*> ContractDef::modifiers() const {
  return members_of<ModifierDef, MemberKind::Modifier>(members);
}
std::vector<const StructDef*> ContractDef::structs() const {
  return members_of<StructDef, MemberKind::Struct>(members);
}

std::vector<FunctionDef*> ContractDef::functions_mut() {
  std::vector<FunctionDef*> out;
  for (auto& m : members)
    if (m->kind == MemberKind::Function) out.push_back(static_cast<FunctionDef*>(m.get()));
  return out;
}

bool ContractDef::has_payable_entry() const {
  for (const auto* f : functions())
    if (f->is_payable()) return true;
  return false;
}

const FunctionDef* ContractDef::find_function(const std::string& fname) const {
  for (const auto* f : functions())
    if (f->name == fname) return f;
  return nullptr;
}

const StateVarDef* ContractDef::find_state_var(const std::string& vname) const {
  for (const auto* v : state_vars())
    if (v->var->name == vname) return v;
  return nullptr;
}

// ---------------------------------------------------------------------------

SourceUnit SourceUnit::clone() const {
  SourceUnit u;
  u.path = path;
  u.pragmas = pragmas;
  for (const auto& c : contracts) u.contracts.push_back(c->clone());
  u.source = source;
  u.ids = ids;
  return u;
}

PragmaVersion SourceUnit::version() const {
  static const std::regex kVersion(R"((\d+)\.(\d+)(?:\.(\d+))?)");
  for (const auto& p : pragmas) {
    if (p.rfind("solidity", 0) != 0) continue;
    std::smatch m;
    if (std::regex_search(p, m, kVersion)) {
      PragmaVersion v;
      v.major = std::stoi(m[1]);
      v.minor = std::stoi(m[2]);
      v.patch = m[3].matched ? std::stoi(m[3]) : 0;
      return v;
    }
  }
  return PragmaVersion{};
}

const ContractDef* SourceUnit::find_contract(const std::string& cname) const {
  for (const auto& c : contracts)
    if (c->name == cname) return c.get();
  return nullptr;
}

ContractDef* SourceUnit::find_contract_mut(const std::string& cname) {
  for (auto& c : contracts)
    if (c->name == cname) return c.get();
  return nullptr;
}

std::uint32_t line_of(const std::string& text, std::uint32_t offset) {
  offset = std::min<std::uint32_t>(offset, static_cast<std::uint32_t>(text.size()));
  return 1 + static_cast<std::uint32_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace solfix::ast
