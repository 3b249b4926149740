#pragma once

/// Typed syntax tree for the supported Solidity subset.
///
/// Every node carries a NodeId that is unique within its SourceUnit and a
/// byte span into the original text. Nodes created by transformations get a
/// fresh id from the unit's IdGen and a span flagged as synthetic.
///
/// Children are owned through unique_ptr. A SourceUnit is treated as
/// immutable once parsing returns; transformations work on a deep clone().

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace solfix::ast {

enum class NodeId : std::uint32_t { Invalid = 0 };

inline std::uint32_t raw(NodeId id) { return static_cast<std::uint32_t>(id); }

struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool synthetic = false;

  static Span synthesized() { return Span{0, 0, true}; }
};

class IdGen {
public:
  NodeId next() { return static_cast<NodeId>(next_++); }
  std::uint32_t peek() const { return next_; }

private:
  std::uint32_t next_ = 1;
};

enum class DataLocation { Default, Storage, Memory, Calldata };
enum class Visibility { Default, Public, External, Internal, Private };
enum class Mutability { NonPayable, Payable, View, Pure, Constant };
enum class ContractKind { Contract, Library, Interface };
enum class FunctionKind { Function, Constructor, Fallback, Receive };

const char* to_string(DataLocation loc);
const char* to_string(Visibility vis);
const char* to_string(Mutability mut);
const char* to_string(ContractKind kind);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Elementary, UserDefined, Mapping, Array };

struct TypeName {
  NodeId id{};
  Span span;
  TypeKind kind = TypeKind::Elementary;
  /// Elementary keyword ("uint256", "address", ...) or dotted user path.
  std::string name;
  bool payable = false;
  /// Mapping key.
  std::unique_ptr<TypeName> key;
  /// Mapping value or array element.
  std::unique_ptr<TypeName> value;
  /// Fixed array length; null for dynamic arrays.
  ExprPtr length;

  TypeName();
  ~TypeName();
  TypeName(TypeName&&) noexcept;
  TypeName& operator=(TypeName&&) noexcept;

  std::unique_ptr<TypeName> clone() const;

  bool is_elementary() const { return kind == TypeKind::Elementary; }
  bool is_address() const { return kind == TypeKind::Elementary && name == "address"; }
  bool is_bool() const { return kind == TypeKind::Elementary && name == "bool"; }
  bool is_integer() const;
  bool is_composite() const;
};

using TypePtr = std::unique_ptr<TypeName>;

TypePtr make_elementary(std::string name, NodeId id, Span span = Span::synthesized());

// ---------------------------------------------------------------------------
// Expressions

enum class ExprKind {
  Identifier,
  Literal,
  ElementaryType,
  Member,
  Index,
  Call,
  CallOptions,
  Unary,
  Binary,
  Assign,
  Conditional,
  Tuple,
  New,
  InlineArray,
};

struct Expr {
  NodeId id{};
  Span span;
  const ExprKind kind;

  explicit Expr(ExprKind k) : kind(k) {}
  virtual ~Expr() = default;
  Expr(const Expr&) = delete;
  Expr& operator=(const Expr&) = delete;

  /// Deep copy preserving node ids and spans.
  virtual ExprPtr clone() const = 0;
};

struct Identifier final : Expr {
  std::string name;
  Identifier() : Expr(ExprKind::Identifier) {}
  ExprPtr clone() const override;
};

enum class LiteralKind { Number, String, HexString, Bool };

struct Literal final : Expr {
  LiteralKind literal = LiteralKind::Number;
  /// Token text exactly as written, quotes included for strings.
  std::string text;
  /// Optional subdenomination ("ether", "days", ...).
  std::string unit;
  Literal() : Expr(ExprKind::Literal) {}
  ExprPtr clone() const override;
};

/// An elementary type used in expression position: `address(0)`, `uint(x)`.
struct ElementaryTypeExpr final : Expr {
  TypePtr type;
  ElementaryTypeExpr() : Expr(ExprKind::ElementaryType) {}
  ExprPtr clone() const override;
};

struct MemberAccess final : Expr {
  ExprPtr base;
  std::string member;
  MemberAccess() : Expr(ExprKind::Member) {}
  ExprPtr clone() const override;
};

struct IndexAccess final : Expr {
  ExprPtr base;
  ExprPtr index;  // null in `T[]` type expressions
  IndexAccess() : Expr(ExprKind::Index) {}
  ExprPtr clone() const override;
};

struct FunctionCall final : Expr {
  ExprPtr callee;
  std::vector<ExprPtr> args;
  /// Non-empty only for `f({a: 1, b: 2})`; parallel to args.
  std::vector<std::string> arg_names;
  FunctionCall() : Expr(ExprKind::Call) {}
  ExprPtr clone() const override;
};

/// `callee{value: v, gas: g}`
struct CallOptions final : Expr {
  ExprPtr callee;
  std::vector<std::string> names;
  std::vector<ExprPtr> values;
  CallOptions() : Expr(ExprKind::CallOptions) {}
  ExprPtr clone() const override;
};

struct UnaryOp final : Expr {
  std::string op;
  bool prefix = true;
  ExprPtr operand;
  UnaryOp() : Expr(ExprKind::Unary) {}
  ExprPtr clone() const override;
};

struct BinaryOp final : Expr {
  std::string op;
  ExprPtr lhs;
  ExprPtr rhs;
  BinaryOp() : Expr(ExprKind::Binary) {}
  ExprPtr clone() const override;
};

struct Assignment final : Expr {
  std::string op;  // "=", "+=", ...
  ExprPtr lhs;
  ExprPtr rhs;
  Assignment() : Expr(ExprKind::Assign) {}
  ExprPtr clone() const override;
};

struct Conditional final : Expr {
  ExprPtr cond;
  ExprPtr then;
  ExprPtr otherwise;
  Conditional() : Expr(ExprKind::Conditional) {}
  ExprPtr clone() const override;
};

/// Parenthesized expression or tuple; components may be null (`(a, , b)`).
struct TupleExpr final : Expr {
  std::vector<ExprPtr> elements;
  TupleExpr() : Expr(ExprKind::Tuple) {}
  ExprPtr clone() const override;
};

struct NewExpr final : Expr {
  TypePtr type;
  NewExpr() : Expr(ExprKind::New) {}
  ExprPtr clone() const override;
};

struct InlineArray final : Expr {
  std::vector<ExprPtr> elements;
  InlineArray() : Expr(ExprKind::InlineArray) {}
  ExprPtr clone() const override;
};

// ---------------------------------------------------------------------------
// Declarations and statements

struct VarDecl {
  NodeId id{};
  Span span;
  TypePtr type;  // null for `var`
  DataLocation location = DataLocation::Default;
  std::string name;  // may be empty for unnamed parameters
  bool indexed = false;

  std::unique_ptr<VarDecl> clone() const;
};

using VarDeclPtr = std::unique_ptr<VarDecl>;

enum class StmtKind {
  Block,
  VarDecl,
  Expression,
  If,
  For,
  While,
  DoWhile,
  Return,
  Break,
  Continue,
  Throw,
  Emit,
  Placeholder,
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  NodeId id{};
  Span span;
  const StmtKind kind;

  explicit Stmt(StmtKind k) : kind(k) {}
  virtual ~Stmt() = default;
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  virtual StmtPtr clone() const = 0;
};

struct Block final : Stmt {
  std::vector<StmtPtr> statements;
  Block() : Stmt(StmtKind::Block) {}
  StmtPtr clone() const override;
  std::unique_ptr<Block> clone_block() const;
};

struct VarDeclStmt final : Stmt {
  /// One entry for `T x = e;`; tuple form may contain null holes.
  std::vector<VarDeclPtr> decls;
  bool tuple = false;
  ExprPtr init;
  VarDeclStmt() : Stmt(StmtKind::VarDecl) {}
  StmtPtr clone() const override;
};

struct ExprStmt final : Stmt {
  ExprPtr expr;
  ExprStmt() : Stmt(StmtKind::Expression) {}
  StmtPtr clone() const override;
};

struct IfStmt final : Stmt {
  ExprPtr cond;
  StmtPtr then;
  StmtPtr otherwise;
  IfStmt() : Stmt(StmtKind::If) {}
  StmtPtr clone() const override;
};

struct ForStmt final : Stmt {
  StmtPtr init;
  ExprPtr cond;
  ExprPtr post;
  StmtPtr body;
  ForStmt() : Stmt(StmtKind::For) {}
  StmtPtr clone() const override;
};

struct WhileStmt final : Stmt {
  ExprPtr cond;
  StmtPtr body;
  WhileStmt() : Stmt(StmtKind::While) {}
  StmtPtr clone() const override;
};

struct DoWhileStmt final : Stmt {
  StmtPtr body;
  ExprPtr cond;
  DoWhileStmt() : Stmt(StmtKind::DoWhile) {}
  StmtPtr clone() const override;
};

struct ReturnStmt final : Stmt {
  ExprPtr value;
  ReturnStmt() : Stmt(StmtKind::Return) {}
  StmtPtr clone() const override;
};

struct EmitStmt final : Stmt {
  ExprPtr call;
  EmitStmt() : Stmt(StmtKind::Emit) {}
  StmtPtr clone() const override;
};

/// Break, Continue, Throw and the modifier placeholder `_`.
struct SimpleStmt final : Stmt {
  explicit SimpleStmt(StmtKind k) : Stmt(k) {}
  StmtPtr clone() const override;
};

// ---------------------------------------------------------------------------
// Contract members

enum class MemberKind { StateVar, Function, Modifier, Struct, Enum, Event, Using };

struct ContractMember;
using MemberPtr = std::unique_ptr<ContractMember>;

struct ContractMember {
  NodeId id{};
  Span span;
  const MemberKind kind;

  explicit ContractMember(MemberKind k) : kind(k) {}
  virtual ~ContractMember() = default;
  ContractMember(const ContractMember&) = delete;
  ContractMember& operator=(const ContractMember&) = delete;

  virtual MemberPtr clone() const = 0;
};

struct StateVarDef final : ContractMember {
  VarDeclPtr var;  // location is always storage
  Visibility visibility = Visibility::Default;
  bool constant = false;
  bool immutable = false;
  ExprPtr init;
  StateVarDef() : ContractMember(MemberKind::StateVar) {}
  MemberPtr clone() const override;
};

struct ModifierInvocation {
  NodeId id{};
  Span span;
  std::string name;
  bool has_args = false;  // written with parentheses
  std::vector<ExprPtr> args;

  ModifierInvocation clone() const;
};

struct FunctionDef final : ContractMember {
  FunctionKind function_kind = FunctionKind::Function;
  std::string name;
  /// Written in the pre-0.5 form: `function Name()` for a constructor or
  /// `function ()` for the fallback.
  bool legacy_form = false;
  std::vector<VarDeclPtr> params;
  std::vector<VarDeclPtr> returns;
  bool has_returns = false;
  Visibility visibility = Visibility::Default;
  Mutability mutability = Mutability::NonPayable;
  bool is_virtual = false;
  std::optional<std::vector<std::string>> overrides;
  std::vector<ModifierInvocation> modifiers;
  std::unique_ptr<Block> body;  // null for declarations

  FunctionDef() : ContractMember(MemberKind::Function) {}
  MemberPtr clone() const override;

  bool is_constructor() const { return function_kind == FunctionKind::Constructor; }
  bool is_payable() const { return mutability == Mutability::Payable; }
  bool is_read_only() const {
    return mutability == Mutability::View || mutability == Mutability::Pure ||
           mutability == Mutability::Constant;
  }
  /// Visibility after applying the language default (public).
  Visibility effective_visibility() const {
    return visibility == Visibility::Default ? Visibility::Public : visibility;
  }
  bool is_entry_point() const {
    auto v = effective_visibility();
    return v == Visibility::Public || v == Visibility::External;
  }
  /// Human readable name; "constructor", "fallback", "receive" for the
  /// special kinds.
  std::string display_name() const;
  /// `name(type,type)` used to identify a function across versions.
  std::string signature() const;
};

struct ModifierDef final : ContractMember {
  std::string name;
  bool has_params = false;
  std::vector<VarDeclPtr> params;
  bool is_virtual = false;
  std::optional<std::vector<std::string>> overrides;
  std::unique_ptr<Block> body;
  ModifierDef() : ContractMember(MemberKind::Modifier) {}
  MemberPtr clone() const override;
};

struct StructDef final : ContractMember {
  std::string name;
  std::vector<VarDeclPtr> fields;
  StructDef() : ContractMember(MemberKind::Struct) {}
  MemberPtr clone() const override;
};

struct EnumDef final : ContractMember {
  std::string name;
  std::vector<std::string> values;
  EnumDef() : ContractMember(MemberKind::Enum) {}
  MemberPtr clone() const override;
};

struct EventDef final : ContractMember {
  std::string name;
  std::vector<VarDeclPtr> params;
  bool anonymous = false;
  EventDef() : ContractMember(MemberKind::Event) {}
  MemberPtr clone() const override;
};

struct UsingFor final : ContractMember {
  std::string library;
  TypePtr type;  // null for `*`
  UsingFor() : ContractMember(MemberKind::Using) {}
  MemberPtr clone() const override;
};

struct InheritanceSpec {
  NodeId id{};
  Span span;
  std::string name;
  bool has_args = false;
  std::vector<ExprPtr> args;

  InheritanceSpec clone() const;
};

struct ContractDef {
  NodeId id{};
  Span span;
  ContractKind kind = ContractKind::Contract;
  bool is_abstract = false;
  std::string name;
  std::vector<InheritanceSpec> bases;
  std::vector<MemberPtr> members;

  std::unique_ptr<ContractDef> clone() const;

  std::vector<const StateVarDef*> state_vars() const;
  std::vector<const FunctionDef*> functions() const;
  std::vector<const ModifierDef*> modifiers() const;
  std::vector<const StructDef*> structs() const;
  std::vector<FunctionDef*> functions_mut();

  /// Any function, fallback, receive or constructor marked payable.
  bool has_payable_entry() const;
  const FunctionDef* find_function(const std::string& name) const;
  const StateVarDef* find_state_var(const std::string& name) const;
};

using ContractPtr = std::unique_ptr<ContractDef>;

struct PragmaVersion {
  int major = 0;
  int minor = 4;
  int patch = 0;

  bool at_least(int mj, int mn, int pt = 0) const {
    if (major != mj) return major > mj;
    if (minor != mn) return minor > mn;
    return patch >= pt;
  }
};

struct SourceUnit {
  std::string path;
  /// Raw pragma bodies, e.g. "solidity ^0.4.24".
  std::vector<std::string> pragmas;
  std::vector<ContractPtr> contracts;
  /// The original text the spans point into.
  std::string source;
  IdGen ids;

  SourceUnit() = default;
  SourceUnit(SourceUnit&&) noexcept = default;
  SourceUnit& operator=(SourceUnit&&) noexcept = default;

  SourceUnit clone() const;

  NodeId fresh_id() { return ids.next(); }

  /// Lower bound of the `pragma solidity` constraint; 0.4.0 when absent.
  PragmaVersion version() const;

  const ContractDef* find_contract(const std::string& name) const;
  ContractDef* find_contract_mut(const std::string& name);
};

/// 1-based line of a byte offset in `text`.
std::uint32_t line_of(const std::string& text, std::uint32_t offset);

}  // namespace solfix::ast
