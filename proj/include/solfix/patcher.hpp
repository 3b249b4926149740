#pragma once

/// Fix patterns as AST edit scripts: require wrapping, dependence-driven
/// reordering with temporaries, the global lock, zero-address checks and
/// withdraw synthesis.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solfix/analysis.hpp"
#include "solfix/detectors.hpp"

namespace solfix::patch {

enum class EditKind {
  InsertStatement,
  MoveStatement,
  WrapInRequire,
  ReplaceExpr,
  DeclareLocal,
  AddStateVar,
  AddFunction,
  AddModifierGuard,
};

const char* to_string(EditKind kind);

/// One AST edit. Nodes are addressed by id; templates are cloned on apply so
/// a script can be applied to any copy of the unit it was planned on.
struct Edit {
  EditKind kind = EditKind::InsertStatement;
  std::string finding;
  /// Statement, expression or function the edit acts on.
  ast::NodeId target{};
  /// Statement before which an insert, move or declaration lands. Invalid
  /// means "append to the block `parent`".
  ast::NodeId before{};
  /// Block for appends; also the function body for guards.
  ast::NodeId parent{};
  /// Insert after `target` instead of before `before`.
  bool after = false;
  std::string contract;
  /// Local, lock or member name.
  std::string name;
  std::shared_ptr<const ast::Stmt> stmt;
  std::shared_ptr<const ast::Expr> expr;
  std::shared_ptr<const ast::ContractMember> member;

  std::string describe() const;
};

enum class Pattern { Require, Reorder, Lock, Validation, Withdraw };

const char* to_string(Pattern p);

struct EditScript {
  std::string finding;
  Pattern pattern = Pattern::Require;
  std::vector<Edit> edits;
  /// Why a fallback pattern was chosen, if one was.
  std::string note;

  bool empty() const { return edits.empty(); }
};

struct GasEstimate {
  Pattern pattern = Pattern::Require;
  long delta = 0;
};

/// Heuristic gas delta: 25000 for the lock, 5 for a reorder, 20 per
/// inserted check and 10 per withdraw edit. Empty scripts cost nothing.
GasEstimate estimate_cost(const EditScript& script);

/// The finding no longer matches the code (already handled or consumed).
class NotApplicable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A reorder plan with a blocked dependence; fall back to the lock.
class PlanBlocked : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An edit refers to a node that does not exist in the unit.
class EditError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Applies edits in order. Throws EditError.
void apply(const EditScript& script, ast::SourceUnit& unit);

EditScript fix_unhandled_exception(const detect::Finding& f, const analysis::UnitAnalysis& a,
                                   ast::SourceUnit& unit);
EditScript fix_missing_input_validation(const detect::Finding& f,
                                        const analysis::UnitAnalysis& a, ast::SourceUnit& unit);
EditScript fix_locked_ether(const detect::Finding& f, const analysis::UnitAnalysis& a,
                            ast::SourceUnit& unit);

enum class Action { IntroduceTemp, MovePair, MoveSingle, Blocked };

const char* to_string(Action a);

/// A dependence between a moved write statement `w` and another statement
/// `s` of the reorder window, oriented in the target order (w placed ahead
/// of the call): RAW means w writes what s reads.
struct PlannedDependence {
  const ast::Stmt* w = nullptr;
  const ast::Stmt* s = nullptr;
  analysis::DepKind kind = analysis::DepKind::RAW;
  analysis::LocId location = -1;
  Action action = Action::MoveSingle;
};

struct Temporary {
  std::string name;
  /// Declared type; empty means `var`.
  std::string type;
  /// Snapshot expression, e.g. `totalUnreleasedTokens` or `m[msg.sender]`.
  const ast::Expr* source = nullptr;
  /// Occurrences replaced by the temporary.
  std::vector<const ast::Expr*> uses;
};

struct ReorderPlan {
  std::string finding;
  const ast::FunctionDef* function = nullptr;
  /// Statement holding the external call.
  const ast::Stmt* call = nullptr;
  /// Statements moved ahead of the call, in original order.
  std::vector<const ast::Stmt*> moved;
  std::vector<PlannedDependence> dependences;
  std::vector<Temporary> temps;
  bool blocked = false;
  std::string reason;
};

ReorderPlan plan_reorder(const detect::Finding& f, const analysis::UnitAnalysis& a);

/// Script realizing a plan. Throws PlanBlocked.
EditScript apply_reorder(const ReorderPlan& plan, ast::SourceUnit& unit);

/// Guards the finding's function with a bool lock named `lock`, adding the
/// state variable when `declare` is set.
EditScript apply_lock(const detect::Finding& f, const analysis::UnitAnalysis& a,
                      ast::SourceUnit& unit, const std::string& lock, bool declare);

struct PatchConfig {
  bool force_lock = false;
  detect::DetectConfig detect;
};

struct PatchOutcome {
  std::string finding;
  std::string pattern;
  int edits = 0;
  long gas = 0;
  /// applied, failed or skipped.
  std::string status;
  std::string note;
};

struct PatchResult {
  ast::SourceUnit patched;
  std::vector<EditScript> scripts;
  std::vector<PatchOutcome> outcomes;
};

/// Applies every fixable finding in class order (UnhandledException,
/// Reentrancy, MissingInputValidation, LockedEther), bottom-up within a
/// class, re-analyzing the working copy before each fix.
PatchResult generate_patches(const ast::SourceUnit& unit,
                             const std::vector<detect::Finding>& findings,
                             const PatchConfig& config = {});

}  // namespace solfix::patch
