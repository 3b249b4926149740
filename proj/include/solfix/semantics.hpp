#pragma once

/// Name resolution, light type inference and call classification over a
/// parsed SourceUnit. Everything here is computed once per unit and is
/// read-only afterwards.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "solfix/ast.hpp"

namespace solfix::sema {

/// Members visible in one contract after merging its `is` chain. Members
/// of a derived contract shadow base members of the same name (functions
/// shadow by signature).
class ContractModel {
public:
  ContractModel(const ast::SourceUnit& unit, const ast::ContractDef& def);

  const ast::ContractDef& def() const { return *def_; }
  /// Most-derived first.
  const std::vector<const ast::ContractDef*>& chain() const { return chain_; }

  /// Base state variables first, in declaration order.
  const std::vector<const ast::StateVarDef*>& state_vars() const { return state_vars_; }
  const std::vector<const ast::FunctionDef*>& functions() const { return functions_; }

  const ast::StateVarDef* state_var(const std::string& name) const;
  /// First function of that name visible from this contract; `arity` < 0
  /// matches any overload.
  const ast::FunctionDef* function(const std::string& name, int arity = -1) const;
  const ast::ModifierDef* modifier(const std::string& name) const;
  const ast::StructDef* struct_def(const std::string& name) const;
  const ast::EnumDef* enum_def(const std::string& name) const;
  bool has_event(const std::string& name) const;
  /// Libraries attached with `using L for T`.
  const std::vector<std::string>& using_libraries() const { return libraries_; }
  /// Contract that declares `member`, searching the chain.
  const ast::ContractDef* owner_of(const ast::ContractMember& member) const;

  bool has_payable_entry() const;

private:
  const ast::ContractDef* def_;
  std::vector<const ast::ContractDef*> chain_;
  std::vector<const ast::StateVarDef*> state_vars_;
  std::vector<const ast::FunctionDef*> functions_;
  std::vector<std::string> libraries_;
};

enum class VarRole { State, Param, Return, Local, ModifierParam };

struct VarInfo {
  const ast::VarDecl* decl = nullptr;
  VarRole role = VarRole::Local;
  const ast::ContractDef* contract = nullptr;
  const ast::FunctionDef* function = nullptr;
  const ast::ModifierDef* modifier = nullptr;
  /// Initializer of a local declaration; null for tuple declarations.
  const ast::Expr* init = nullptr;
  /// Storage, Memory or Calldata for reference types; Default for values.
  ast::DataLocation location = ast::DataLocation::Default;
  bool composite = false;
};

enum class SymbolKind { Variable, Function, Contract, Struct, Enum, Event, Modifier, Builtin, Unknown };

struct Symbol {
  SymbolKind kind = SymbolKind::Unknown;
  const ast::VarDecl* var = nullptr;
  const ast::FunctionDef* function = nullptr;
  const ast::ContractDef* contract = nullptr;
  std::string name;
};

struct TypeRef {
  enum class Kind {
    Unknown,
    Elementary,  // name holds the canonical keyword
    Contract,    // name holds the contract name
    Struct,
    Enum,
    Mapping,     // node points at the declared mapping type
    Array,
    Magic,       // msg, block, tx, abi
    TypeExpr,    // a type used as a value, e.g. the callee of `uint(x)`
    Function,
  };
  Kind kind = Kind::Unknown;
  std::string name;
  const ast::TypeName* node = nullptr;
  const ast::FunctionDef* function = nullptr;
  /// Contract whose scope resolves user-defined names inside `node`.
  const ast::ContractDef* scope = nullptr;

  bool is(Kind k) const { return kind == k; }
  bool is_address() const { return kind == Kind::Elementary && name == "address"; }
  bool is_bool() const { return kind == Kind::Elementary && name == "bool"; }
  bool is_elementary_value() const {
    return kind == Kind::Elementary && name != "string" && name != "bytes";
  }
  bool is_value() const {
    return is_elementary_value() || kind == Kind::Contract || kind == Kind::Enum;
  }
};

enum class CallKind {
  Internal,
  ExternalContract,
  EtherSend,
  EtherTransfer,
  EtherCallValue,
  Delegatecall,
};

const char* to_string(CallKind kind);

struct CallInfo {
  CallKind kind = CallKind::Internal;
  /// Fallback classification for a receiver whose type could not be found.
  bool low_confidence = false;
  /// `x.call(...)` without a value; classified external-contract.
  bool low_level = false;
  /// Option setter such as the inner `x.call.value(v)` of a chained call.
  bool option_setter = false;
  /// Resolved internal callee (same or base contract, or `this.f()`).
  const ast::FunctionDef* callee = nullptr;
  /// Language builtin (require, keccak256, push, type conversion, ...).
  std::string builtin;
  /// Receiver expression of member calls (`x` in `x.send(v)`).
  const ast::Expr* receiver = nullptr;
  /// Value argument of ether transfers.
  const ast::Expr* value = nullptr;

  bool is_external() const { return kind != CallKind::Internal; }
  bool is_ether_transfer() const {
    return kind == CallKind::EtherSend || kind == CallKind::EtherTransfer ||
           kind == CallKind::EtherCallValue;
  }
};

/// Resolution results for one SourceUnit. The unit must outlive this object.
class Program {
public:
  explicit Program(const ast::SourceUnit& unit);
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;

  const ast::SourceUnit& unit() const { return *unit_; }
  const std::vector<std::unique_ptr<ContractModel>>& contracts() const { return models_; }
  const ContractModel* model(const ast::ContractDef& def) const;
  const ContractModel* model(const std::string& name) const;

  /// Symbol bound to an identifier expression.
  const Symbol* symbol(const ast::Identifier& id) const;
  /// Variable an identifier refers to, or null.
  const ast::VarDecl* var_of(const ast::Expr& e) const;
  const VarInfo* info(const ast::VarDecl* decl) const;
  const std::unordered_map<const ast::VarDecl*, VarInfo>& vars() const { return vars_; }

  /// Contract whose code contains this function or modifier.
  const ast::ContractDef* owner(const ast::ContractMember& m) const;

  TypeRef type_of(const ast::Expr& e) const;
  TypeRef type_of(const ast::VarDecl& d) const;
  TypeRef from_type_name(const ast::TypeName* t, const ast::ContractDef* scope) const;
  bool is_composite(const TypeRef& t) const;

  CallInfo classify(const ast::FunctionCall& call) const;

  /// Root variable of an lvalue-like expression: `a` in `a.b[c].d`.
  const ast::VarDecl* root_var(const ast::Expr& e) const;
  /// Storage/Memory/Calldata of what `e` denotes, Default for values.
  ast::DataLocation location_of(const ast::Expr& e) const;

private:
  friend class Resolver;

  const ast::SourceUnit* unit_;
  std::vector<std::unique_ptr<ContractModel>> models_;
  std::unordered_map<std::uint32_t, Symbol> symbols_;
  std::unordered_map<const ast::VarDecl*, VarInfo> vars_;
  std::unordered_map<const ast::ContractMember*, const ast::ContractDef*> owners_;
};

/// Names of global functions that never transfer control to other contracts.
bool is_builtin_function(const std::string& name);

}  // namespace solfix::sema
