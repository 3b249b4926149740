#pragma once

#include <stdexcept>
#include <string>

#include "solfix/ast.hpp"

namespace solfix {

/// A tree the printer cannot emit, e.g. an expression statement with no
/// expression left behind by an incomplete edit.
class PrintError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Canonical source text: four-space indentation, one statement per line,
/// fixed attribute order. Comments are not preserved.
std::string print(const ast::SourceUnit& unit);

std::string print_contract(const ast::ContractDef& contract, int indent = 0);
std::string print_member(const ast::ContractMember& member, int indent = 0);
/// Statement text without leading indentation or trailing newline. Nested
/// lines are indented relative to `indent`.
std::string print_stmt(const ast::Stmt& stmt, int indent = 0);
std::string print_expr(const ast::Expr& expr);
std::string print_type(const ast::TypeName& type);

/// S-expression rendering of the tree with ids and spans omitted. Two trees
/// are structurally equal iff their dumps are equal.
std::string dump_structure(const ast::SourceUnit& unit);
std::string dump_structure(const ast::Stmt& stmt);
std::string dump_structure(const ast::Expr& expr);

bool structurally_equal(const ast::SourceUnit& a, const ast::SourceUnit& b);

}  // namespace solfix
