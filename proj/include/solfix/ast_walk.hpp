#pragma once

// Pre-order traversal helpers. Each template works on both const and
// mutable trees; the callback receives the same constness as the root.

#include <type_traits>

#include "solfix/ast.hpp"

namespace solfix::ast {

namespace detail {
template <typename To, typename From>
using same_const_t = std::conditional_t<std::is_const_v<From>, const To, To>;

template <typename To, typename From>
same_const_t<To, From>& as(From& from) {
  return static_cast<same_const_t<To, From>&>(from);
}
}  // namespace detail

/// Visits `e` and every sub-expression in pre-order. The callback returns
/// false to skip the children of the current node.
template <typename E, typename F>
void walk_expr(E& e, F&& f) {
  using detail::as;
  if (!f(e)) return;
  auto sub = [&](auto& p) {
    if (p) walk_expr(*p, f);
  };
  switch (e.kind) {
    case ExprKind::Identifier:
    case ExprKind::Literal:
    case ExprKind::ElementaryType:
    case ExprKind::New:
      break;
    case ExprKind::Member: sub(as<MemberAccess>(e).base); break;
    case ExprKind::Index: {
      auto& x = as<IndexAccess>(e);
      sub(x.base);
      sub(x.index);
      break;
    }
    case ExprKind::Call: {
      auto& x = as<FunctionCall>(e);
      sub(x.callee);
      for (auto& a : x.args) sub(a);
      break;
    }
    case ExprKind::CallOptions: {
      auto& x = as<CallOptions>(e);
      sub(x.callee);
      for (auto& a : x.values) sub(a);
      break;
    }
    case ExprKind::Unary: sub(as<UnaryOp>(e).operand); break;
    case ExprKind::Binary: {
      auto& x = as<BinaryOp>(e);
      sub(x.lhs);
      sub(x.rhs);
      break;
    }
    case ExprKind::Assign: {
      auto& x = as<Assignment>(e);
      sub(x.lhs);
      sub(x.rhs);
      break;
    }
    case ExprKind::Conditional: {
      auto& x = as<Conditional>(e);
      sub(x.cond);
      sub(x.then);
      sub(x.otherwise);
      break;
    }
    case ExprKind::Tuple:
      for (auto& a : as<TupleExpr>(e).elements) sub(a);
      break;
    case ExprKind::InlineArray:
      for (auto& a : as<InlineArray>(e).elements) sub(a);
      break;
  }
}

/// Calls `f` on each expression directly owned by statement `s` (not those
/// of nested statements).
template <typename S, typename F>
void direct_exprs(S& s0, F&& f) {
  auto& s = static_cast<detail::same_const_t<Stmt, S>&>(s0);
  using detail::as;
  auto call = [&](auto& p) {
    if (p) f(*p);
  };
  switch (s.kind) {
    case StmtKind::VarDecl: call(as<VarDeclStmt>(s).init); break;
    case StmtKind::Expression: call(as<ExprStmt>(s).expr); break;
    case StmtKind::If: call(as<IfStmt>(s).cond); break;
    case StmtKind::For: {
      auto& x = as<ForStmt>(s);
      call(x.cond);
      call(x.post);
      break;
    }
    case StmtKind::While: call(as<WhileStmt>(s).cond); break;
    case StmtKind::DoWhile: call(as<DoWhileStmt>(s).cond); break;
    case StmtKind::Return: call(as<ReturnStmt>(s).value); break;
    case StmtKind::Emit: call(as<EmitStmt>(s).call); break;
    default: break;
  }
}

/// Calls `f` on each statement directly nested in `s`.
template <typename S, typename F>
void child_stmts(S& s0, F&& f) {
  auto& s = static_cast<detail::same_const_t<Stmt, S>&>(s0);
  using detail::as;
  auto call = [&](auto& p) {
    if (p) f(*p);
  };
  switch (s.kind) {
    case StmtKind::Block:
      for (auto& c : as<Block>(s).statements) call(c);
      break;
    case StmtKind::If: {
      auto& x = as<IfStmt>(s);
      call(x.then);
      call(x.otherwise);
      break;
    }
    case StmtKind::For: {
      auto& x = as<ForStmt>(s);
      call(x.init);
      call(x.body);
      break;
    }
    case StmtKind::While: call(as<WhileStmt>(s).body); break;
    case StmtKind::DoWhile: call(as<DoWhileStmt>(s).body); break;
    default: break;
  }
}

/// Pre-order over `s` and all nested statements.
template <typename S, typename F>
void walk_stmt(S& s0, F&& f) {
  auto& s = static_cast<detail::same_const_t<Stmt, S>&>(s0);
  f(s);
  child_stmts(s, [&](auto& c) { walk_stmt(c, f); });
}

/// Every expression reachable from `s`, nested statements included.
template <typename S, typename F>
void walk_stmt_exprs(S& s0, F&& f) {
  auto& s = static_cast<detail::same_const_t<Stmt, S>&>(s0);
  walk_stmt(s, [&](auto& st) { direct_exprs(st, [&](auto& e) { walk_expr(e, f); }); });
}

/// Strips parentheses: `((x))` -> `x`.
inline const Expr* strip_parens(const Expr* e) {
  while (e && e->kind == ExprKind::Tuple) {
    const auto& t = static_cast<const TupleExpr&>(*e);
    if (t.elements.size() != 1 || !t.elements[0]) break;
    e = t.elements[0].get();
  }
  return e;
}

}  // namespace solfix::ast
