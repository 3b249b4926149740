#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "solfix/ast.hpp"
#include "solfix/semantics.hpp"

namespace solfix::analysis {

enum class BlockKind { Entry, Exit, Statement, Condition, LoopPost };
enum class EdgeKind { Seq, True, False, LoopBack };

const char* to_string(BlockKind kind);
const char* to_string(EdgeKind kind);

struct CfgBlock {
  int id = 0;
  BlockKind kind = BlockKind::Statement;
  /// Statement this block evaluates; for conditions and loop posts, the
  /// owning if/for/while statement.
  const ast::Stmt* stmt = nullptr;
  /// Expression evaluated by Condition and LoopPost blocks.
  const ast::Expr* expr = nullptr;
  /// 0 for the function body, k for the k-th applied modifier (1-based).
  int scope = 0;
  /// Modifier statement placed after the placeholder.
  bool in_suffix = false;
  /// Enclosing if/while/for condition blocks, outermost first.
  std::vector<int> conditions;
  int loop_depth = 0;
};

struct CfgEdge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::Seq;
};

struct ModifierInstance {
  const ast::ModifierDef* def = nullptr;
  const ast::ModifierInvocation* invocation = nullptr;
  int scope = 0;
  /// Parameter bound to the invocation argument expression.
  std::vector<std::pair<const ast::VarDecl*, const ast::Expr*>> bindings;
};

class MissingModifier : public std::runtime_error {
public:
  explicit MissingModifier(const std::string& name)
      : std::runtime_error("unresolved modifier '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

/// Control-flow graph of one function with its modifiers inlined, one
/// statement per block.
class Cfg {
public:
  const ast::FunctionDef* function = nullptr;
  const ast::ContractDef* contract = nullptr;
  std::vector<CfgBlock> blocks;
  std::vector<CfgEdge> edges;
  std::vector<ModifierInstance> modifiers;
  int entry = 0;
  int exit = 1;

  const std::vector<int>& succs(int b) const { return succ_[b]; }
  const std::vector<int>& preds(int b) const { return pred_[b]; }

  /// Block evaluating `stmt` in the given scope, -1 if none.
  int block_of(const ast::Stmt* stmt, int scope = 0) const;
  /// Blocks reachable from `b` through at least one edge.
  const std::vector<bool>& reachable_from(int b) const;
  bool reaches(int from, int to) const { return reachable_from(from)[to]; }
  /// Statement, Condition and LoopPost blocks in id order.
  std::vector<int> statement_blocks() const;

  /// One line per edge: `from -> to [kind]`, preceded by one line per block.
  std::string dump() const;

  void finalize();

private:
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
  mutable std::vector<std::vector<bool>> reach_;
};

/// Builds the CFG of `fn` as seen from `contract` (which resolves the
/// applied modifiers). Throws MissingModifier.
Cfg build_cfg(const ast::FunctionDef& fn, const sema::ContractModel& contract);

/// True for `throw;` and `revert(...);`: control never falls through.
bool always_reverts(const ast::Stmt& s);

}  // namespace solfix::analysis
