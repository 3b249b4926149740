#include "solfix/printer.hpp"

#include <sstream>

namespace solfix {

using namespace ast;

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

template <typename T>
const T& need(const std::unique_ptr<T>& p, const char* what) {
  if (!p) throw PrintError(std::string("missing ") + what);
  return *p;
}

// Binding strength used to decide where synthesized trees need parentheses.
// Parsed parentheses survive as one-element tuples and are printed as such.
constexpr int kAssign = 0;
constexpr int kConditional = 1;
constexpr int kUnary = 14;
constexpr int kPostfix = 15;
constexpr int kPrimary = 16;

int binary_strength(const std::string& op) {
  if (op == "||") return 2;
  if (op == "&&") return 3;
  if (op == "==" || op == "!=") return 4;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 5;
  if (op == "|") return 6;
  if (op == "^") return 7;
  if (op == "&") return 8;
  if (op == "<<" || op == ">>") return 9;
  if (op == "+" || op == "-") return 10;
  if (op == "*" || op == "/" || op == "%") return 11;
  if (op == "**") return 12;
  throw PrintError("unknown binary operator '" + op + "'");
}

int strength(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Assign: return kAssign;
    case ExprKind::Conditional: return kConditional;
    case ExprKind::Binary: return binary_strength(static_cast<const BinaryOp&>(e).op);
    case ExprKind::Unary:
      return static_cast<const UnaryOp&>(e).prefix ? kUnary : kPostfix;
    case ExprKind::Member:
    case ExprKind::Index:
    case ExprKind::Call:
    case ExprKind::CallOptions:
      return kPostfix;
    default: return kPrimary;
  }
}

std::string expr_at(const Expr& e, int min_strength);

std::string expr_list(const std::vector<ExprPtr>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(need(v[i], "list element"));
  }
  return out;
}

std::string expr_text(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Identifier: return static_cast<const Identifier&>(e).name;
    case ExprKind::Literal: {
      const auto& l = static_cast<const Literal&>(e);
      return l.unit.empty() ? l.text : l.text + " " + l.unit;
    }
    case ExprKind::ElementaryType:
      return print_type(need(static_cast<const ElementaryTypeExpr&>(e).type, "type"));
    case ExprKind::Member: {
      const auto& m = static_cast<const MemberAccess&>(e);
      return expr_at(need(m.base, "member base"), kPostfix) + "." + m.member;
    }
    case ExprKind::Index: {
      const auto& x = static_cast<const IndexAccess&>(e);
      std::string idx = x.index ? print_expr(*x.index) : "";
      return expr_at(need(x.base, "index base"), kPostfix) + "[" + idx + "]";
    }
    case ExprKind::Call: {
      const auto& c = static_cast<const FunctionCall&>(e);
      std::string callee = expr_at(need(c.callee, "callee"), kPostfix);
      if (c.arg_names.empty()) return callee + "(" + expr_list(c.args) + ")";
      if (c.arg_names.size() != c.args.size()) throw PrintError("named argument mismatch");
      std::string out = callee + "({";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ", ";
        out += c.arg_names[i] + ": " + print_expr(need(c.args[i], "argument"));
      }
      return out + "})";
    }
    case ExprKind::CallOptions: {
      const auto& o = static_cast<const CallOptions&>(e);
      if (o.names.size() != o.values.size()) throw PrintError("call option mismatch");
      std::string out = expr_at(need(o.callee, "callee"), kPostfix) + "{";
      for (std::size_t i = 0; i < o.names.size(); ++i) {
        if (i) out += ", ";
        out += o.names[i] + ": " + print_expr(need(o.values[i], "call option"));
      }
      return out + "}";
    }
    case ExprKind::Unary: {
      const auto& u = static_cast<const UnaryOp&>(e);
      if (!u.prefix) return expr_at(need(u.operand, "operand"), kPostfix) + u.op;
      std::string operand = expr_at(need(u.operand, "operand"), kUnary);
      bool word = u.op == "delete";
      // `- -x` must not fuse into `--x`
      bool fuse = !operand.empty() && (u.op.back() == '-' || u.op.back() == '+') &&
                  operand.front() == u.op.back();
      return u.op + (word || fuse ? " " : "") + operand;
    }
    case ExprKind::Binary: {
      const auto& b = static_cast<const BinaryOp&>(e);
      int s = binary_strength(b.op);
      bool right = b.op == "**";
      return expr_at(need(b.lhs, "operand"), right ? s + 1 : s) + " " + b.op + " " +
             expr_at(need(b.rhs, "operand"), right ? s : s + 1);
    }
    case ExprKind::Assign: {
      const auto& a = static_cast<const Assignment&>(e);
      return expr_at(need(a.lhs, "assignment target"), kConditional) + " " + a.op + " " +
             expr_at(need(a.rhs, "assigned value"), kAssign);
    }
    case ExprKind::Conditional: {
      const auto& c = static_cast<const Conditional&>(e);
      return expr_at(need(c.cond, "condition"), kConditional + 1) + " ? " +
             expr_at(need(c.then, "branch"), kAssign) + " : " +
             expr_at(need(c.otherwise, "branch"), kConditional);
    }
    case ExprKind::Tuple: {
      const auto& t = static_cast<const TupleExpr&>(e);
      std::string out = "(";
      for (std::size_t i = 0; i < t.elements.size(); ++i) {
        if (i) out += ", ";
        if (t.elements[i]) out += print_expr(*t.elements[i]);
      }
      // `(a, )` keeps its trailing hole; a lone hole needs the comma too
      if (t.elements.size() == 1 && !t.elements[0]) out += ",";
      return out + ")";
    }
    case ExprKind::New:
      return "new " + print_type(need(static_cast<const NewExpr&>(e).type, "type"));
    case ExprKind::InlineArray:
      return "[" + expr_list(static_cast<const InlineArray&>(e).elements) + "]";
  }
  throw PrintError("expression kind without emission rule");
}

std::string expr_at(const Expr& e, int min_strength) {
  std::string s = expr_text(e);
  return strength(e) < min_strength ? "(" + s + ")" : s;
}

std::string decl_text(const VarDecl& d) {
  std::string out = d.type ? print_type(*d.type) : "var";
  if (d.indexed) out += " indexed";
  if (d.location != DataLocation::Default) out += std::string(" ") + to_string(d.location);
  if (!d.name.empty()) out += " " + d.name;
  return out;
}

std::string param_list(const std::vector<VarDeclPtr>& ps) {
  std::string out = "(";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += decl_text(need(ps[i], "parameter"));
  }
  return out + ")";
}

std::string var_decl_stmt_text(const VarDeclStmt& s) {
  std::string out;
  bool untyped = !s.decls.empty() && s.decls.front() && !s.decls.front()->type;
  if (s.tuple) {
    out = untyped ? "var (" : "(";
    for (std::size_t i = 0; i < s.decls.size(); ++i) {
      if (i) out += ", ";
      if (!s.decls[i]) continue;
      out += untyped ? s.decls[i]->name : decl_text(*s.decls[i]);
    }
    if (s.decls.size() == 1 && !s.decls[0]) out += ",";
    out += ")";
  } else {
    if (s.decls.size() != 1 || !s.decls[0]) throw PrintError("malformed declaration");
    out = decl_text(*s.decls[0]);
  }
  if (s.init) out += " = " + print_expr(*s.init);
  return out;
}

// Statement text usable in a `for` header: no trailing semicolon.
std::string simple_text(const Stmt& s) {
  if (s.kind == StmtKind::VarDecl) return var_decl_stmt_text(static_cast<const VarDeclStmt&>(s));
  if (s.kind == StmtKind::Expression)
    return print_expr(need(static_cast<const ExprStmt&>(s).expr, "expression"));
  throw PrintError("statement kind not allowed in for-loop header");
}

std::string block_text(const Block& b, int indent) {
  if (b.statements.empty()) return "{\n" + pad(indent) + "}";
  std::string out = "{\n";
  for (const auto& s : b.statements)
    out += pad(indent + 1) + print_stmt(need(s, "statement"), indent + 1) + "\n";
  return out + pad(indent) + "}";
}

// Body of if/for/while: blocks open on the same line, anything else goes on
// its own indented line.
std::string nested(const Stmt& s, int indent) {
  if (s.kind == StmtKind::Block) return " " + block_text(static_cast<const Block&>(s), indent);
  return "\n" + pad(indent + 1) + print_stmt(s, indent + 1);
}

std::string modifier_invocation(const ModifierInvocation& m) {
  return m.has_args ? m.name + "(" + expr_list(m.args) + ")" : m.name;
}

std::string override_text(const std::optional<std::vector<std::string>>& o) {
  if (!o) return "";
  std::string out = " override";
  if (!o->empty()) {
    out += "(";
    for (std::size_t i = 0; i < o->size(); ++i) out += (i ? ", " : "") + (*o)[i];
    out += ")";
  }
  return out;
}

std::string function_text(const FunctionDef& f, int indent) {
  std::string out;
  switch (f.function_kind) {
    case FunctionKind::Constructor:
      out = f.legacy_form ? "function " + f.name : "constructor";
      break;
    case FunctionKind::Fallback: out = f.legacy_form ? "function " : "fallback"; break;
    case FunctionKind::Receive: out = "receive"; break;
    case FunctionKind::Function: out = "function " + f.name; break;
  }
  out += param_list(f.params);
  if (f.visibility != Visibility::Default) out += std::string(" ") + to_string(f.visibility);
  if (f.mutability != Mutability::NonPayable) out += std::string(" ") + to_string(f.mutability);
  if (f.is_virtual) out += " virtual";
  out += override_text(f.overrides);
  for (const auto& m : f.modifiers) out += " " + modifier_invocation(m);
  if (f.has_returns) out += " returns " + param_list(f.returns);
  if (!f.body) return out + ";";
  return out + " " + block_text(*f.body, indent);
}

}  // namespace

std::string print_type(const TypeName& t) {
  switch (t.kind) {
    case TypeKind::Elementary: return t.payable ? t.name + " payable" : t.name;
    case TypeKind::UserDefined: return t.name;
    case TypeKind::Mapping:
      return "mapping(" + print_type(need(t.key, "mapping key")) + " => " +
             print_type(need(t.value, "mapping value")) + ")";
    case TypeKind::Array:
      return print_type(need(t.value, "array element")) + "[" +
             (t.length ? print_expr(*t.length) : "") + "]";
  }
  throw PrintError("type kind without emission rule");
}

std::string print_expr(const Expr& e) { return expr_text(e); }

std::string print_stmt(const Stmt& s, int indent) {
  switch (s.kind) {
    case StmtKind::Block: return block_text(static_cast<const Block&>(s), indent);
    case StmtKind::VarDecl:
    case StmtKind::Expression: return simple_text(s) + ";";
    case StmtKind::If: {
      const auto& x = static_cast<const IfStmt&>(s);
      std::string out = "if (" + print_expr(need(x.cond, "condition")) + ")" +
                        nested(need(x.then, "then branch"), indent);
      if (x.otherwise) {
        out += x.then->kind == StmtKind::Block ? " else" : "\n" + pad(indent) + "else";
        if (x.otherwise->kind == StmtKind::If)
          out += " " + print_stmt(*x.otherwise, indent);
        else
          out += nested(*x.otherwise, indent);
      }
      return out;
    }
    case StmtKind::For: {
      const auto& x = static_cast<const ForStmt&>(s);
      std::string head = "for (";
      head += x.init ? simple_text(*x.init) + ";" : ";";
      head += x.cond ? " " + print_expr(*x.cond) + ";" : ";";
      if (x.post) head += " " + print_expr(*x.post);
      return head + ")" + nested(need(x.body, "loop body"), indent);
    }
    case StmtKind::While: {
      const auto& x = static_cast<const WhileStmt&>(s);
      return "while (" + print_expr(need(x.cond, "condition")) + ")" +
             nested(need(x.body, "loop body"), indent);
    }
    case StmtKind::DoWhile: {
      const auto& x = static_cast<const DoWhileStmt&>(s);
      const Stmt& body = need(x.body, "loop body");
      std::string out = "do" + nested(body, indent);
      out += body.kind == StmtKind::Block ? " " : "\n" + pad(indent);
      return out + "while (" + print_expr(need(x.cond, "condition")) + ");";
    }
    case StmtKind::Return: {
      const auto& x = static_cast<const ReturnStmt&>(s);
      return x.value ? "return " + print_expr(*x.value) + ";" : "return;";
    }
    case StmtKind::Emit:
      return "emit " + print_expr(need(static_cast<const EmitStmt&>(s).call, "event call")) + ";";
    case StmtKind::Break: return "break;";
    case StmtKind::Continue: return "continue;";
    case StmtKind::Throw: return "throw;";
    case StmtKind::Placeholder: return "_;";
  }
  throw PrintError("statement kind without emission rule");
}

std::string print_member(const ContractMember& m, int indent) {
  std::string out = pad(indent);
  switch (m.kind) {
    case MemberKind::StateVar: {
      const auto& v = static_cast<const StateVarDef&>(m);
      const VarDecl& d = need(v.var, "state variable");
      out += print_type(need(d.type, "state variable type"));
      if (v.visibility != Visibility::Default) out += std::string(" ") + to_string(v.visibility);
      if (v.constant) out += " constant";
      if (v.immutable) out += " immutable";
      out += " " + d.name;
      if (v.init) out += " = " + print_expr(*v.init);
      return out + ";";
    }
    case MemberKind::Function:
      return out + function_text(static_cast<const FunctionDef&>(m), indent);
    case MemberKind::Modifier: {
      const auto& x = static_cast<const ModifierDef&>(m);
      out += "modifier " + x.name;
      if (x.has_params) out += param_list(x.params);
      if (x.is_virtual) out += " virtual";
      out += override_text(x.overrides);
      return out + " " + block_text(need(x.body, "modifier body"), indent);
    }
    case MemberKind::Struct: {
      const auto& x = static_cast<const StructDef&>(m);
      out += "struct " + x.name + " {\n";
      for (const auto& f : x.fields) out += pad(indent + 1) + decl_text(need(f, "field")) + ";\n";
      return out + pad(indent) + "}";
    }
    case MemberKind::Enum: {
      const auto& x = static_cast<const EnumDef&>(m);
      out += "enum " + x.name + " {";
      for (std::size_t i = 0; i < x.values.size(); ++i) out += (i ? ", " : " ") + x.values[i];
      return out + (x.values.empty() ? "}" : " }");
    }
    case MemberKind::Event: {
      const auto& x = static_cast<const EventDef&>(m);
      out += "event " + x.name + param_list(x.params);
      if (x.anonymous) out += " anonymous";
      return out + ";";
    }
    case MemberKind::Using: {
      const auto& x = static_cast<const UsingFor&>(m);
      return out + "using " + x.library + " for " + (x.type ? print_type(*x.type) : "*") + ";";
    }
  }
  throw PrintError("member kind without emission rule");
}

std::string print_contract(const ContractDef& c, int indent) {
  std::string out = pad(indent);
  if (c.is_abstract) out += "abstract ";
  out += std::string(to_string(c.kind)) + " " + c.name;
  for (std::size_t i = 0; i < c.bases.size(); ++i) {
    const auto& b = c.bases[i];
    out += i ? ", " : " is ";
    out += b.has_args ? b.name + "(" + expr_list(b.args) + ")" : b.name;
  }
  if (c.members.empty()) return out + " {\n" + pad(indent) + "}";
  out += " {\n";
  auto single_line = [](const ContractMember& m) {
    return m.kind == MemberKind::StateVar || m.kind == MemberKind::Event ||
           m.kind == MemberKind::Using || m.kind == MemberKind::Enum;
  };
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    const ContractMember& m = need(c.members[i], "member");
    if (i && !(single_line(m) && single_line(*c.members[i - 1]))) out += "\n";
    out += print_member(m, indent + 1) + "\n";
  }
  return out + pad(indent) + "}";
}

std::string print(const SourceUnit& unit) {
  std::string out;
  for (const auto& p : unit.pragmas) out += "pragma " + p + ";\n";
  for (const auto& c : unit.contracts) {
    if (!out.empty()) out += "\n";
    out += print_contract(need(c, "contract")) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure dump

namespace {

class Dumper {
public:
  std::string take() { return std::move(out_); }

  void unit(const SourceUnit& u) {
    open("unit");
    for (const auto& p : u.pragmas) atom("pragma:" + p);
    for (const auto& c : u.contracts) contract(*c);
    close();
  }

  void contract(const ContractDef& c) {
    open(std::string(to_string(c.kind)) + (c.is_abstract ? "-abstract " : " ") + c.name);
    for (const auto& b : c.bases) {
      open("base " + b.name + (b.has_args ? "()" : ""));
      for (const auto& a : b.args) expr(a.get());
      close();
    }
    for (const auto& m : c.members) member(*m);
    close();
  }

  void member(const ContractMember& m) {
    switch (m.kind) {
      case MemberKind::StateVar: {
        const auto& v = static_cast<const StateVarDef&>(m);
        open(std::string("state ") + to_string(v.visibility) + (v.constant ? " constant" : "") +
             (v.immutable ? " immutable" : ""));
        decl(v.var.get());
        expr(v.init.get());
        close();
        return;
      }
      case MemberKind::Function: {
        const auto& f = static_cast<const FunctionDef&>(m);
        open("function " + f.display_name() + " " + f.name + (f.legacy_form ? " legacy" : "") +
             " " + to_string(f.visibility) + " " + to_string(f.mutability) +
             (f.is_virtual ? " virtual" : "") + (f.has_returns ? " returns" : ""));
        if (f.overrides) {
          open("override");
          for (const auto& o : *f.overrides) atom(o);
          close();
        }
        decls("params", f.params);
        decls("returns", f.returns);
        for (const auto& mi : f.modifiers) {
          open("modifier-use " + mi.name + (mi.has_args ? "()" : ""));
          for (const auto& a : mi.args) expr(a.get());
          close();
        }
        stmt(f.body.get());
        close();
        return;
      }
      case MemberKind::Modifier: {
        const auto& x = static_cast<const ModifierDef&>(m);
        open("modifier " + x.name + (x.has_params ? "()" : "") + (x.is_virtual ? " virtual" : ""));
        decls("params", x.params);
        stmt(x.body.get());
        close();
        return;
      }
      case MemberKind::Struct: {
        const auto& x = static_cast<const StructDef&>(m);
        decls("struct " + x.name, x.fields);
        return;
      }
      case MemberKind::Enum: {
        const auto& x = static_cast<const EnumDef&>(m);
        open("enum " + x.name);
        for (const auto& v : x.values) atom(v);
        close();
        return;
      }
      case MemberKind::Event: {
        const auto& x = static_cast<const EventDef&>(m);
        decls("event " + x.name + (x.anonymous ? " anonymous" : ""), x.params);
        return;
      }
      case MemberKind::Using: {
        const auto& x = static_cast<const UsingFor&>(m);
        open("using " + x.library);
        type(x.type.get());
        close();
        return;
      }
    }
  }

  void decls(const std::string& head, const std::vector<VarDeclPtr>& ds) {
    open(head);
    for (const auto& d : ds) decl(d.get());
    close();
  }

  void decl(const VarDecl* d) {
    if (!d) return atom("_");
    open(std::string("decl ") + d->name + " " + to_string(d->location) +
         (d->indexed ? " indexed" : ""));
    type(d->type.get());
    close();
  }

  void type(const TypeName* t) {
    if (!t) return atom("_");
    switch (t->kind) {
      case TypeKind::Elementary: return atom(t->payable ? t->name + " payable" : t->name);
      case TypeKind::UserDefined: return atom("user " + t->name);
      case TypeKind::Mapping:
        open("mapping");
        type(t->key.get());
        type(t->value.get());
        close();
        return;
      case TypeKind::Array:
        open("array");
        type(t->value.get());
        expr(t->length.get());
        close();
        return;
    }
  }

  void stmt(const Stmt* s) {
    if (!s) return atom("_");
    switch (s->kind) {
      case StmtKind::Block:
        open("block");
        for (const auto& c : static_cast<const Block&>(*s).statements) stmt(c.get());
        break;
      case StmtKind::VarDecl: {
        const auto& x = static_cast<const VarDeclStmt&>(*s);
        open(x.tuple ? "let-tuple" : "let");
        for (const auto& d : x.decls) decl(d.get());
        expr(x.init.get());
        break;
      }
      case StmtKind::Expression:
        open("expr");
        expr(static_cast<const ExprStmt&>(*s).expr.get());
        break;
      case StmtKind::If: {
        const auto& x = static_cast<const IfStmt&>(*s);
        open("if");
        expr(x.cond.get());
        stmt(x.then.get());
        stmt(x.otherwise.get());
        break;
      }
      case StmtKind::For: {
        const auto& x = static_cast<const ForStmt&>(*s);
        open("for");
        stmt(x.init.get());
        expr(x.cond.get());
        expr(x.post.get());
        stmt(x.body.get());
        break;
      }
      case StmtKind::While: {
        const auto& x = static_cast<const WhileStmt&>(*s);
        open("while");
        expr(x.cond.get());
        stmt(x.body.get());
        break;
      }
      case StmtKind::DoWhile: {
        const auto& x = static_cast<const DoWhileStmt&>(*s);
        open("do");
        stmt(x.body.get());
        expr(x.cond.get());
        break;
      }
      case StmtKind::Return:
        open("return");
        expr(static_cast<const ReturnStmt&>(*s).value.get());
        break;
      case StmtKind::Emit:
        open("emit");
        expr(static_cast<const EmitStmt&>(*s).call.get());
        break;
      case StmtKind::Break: return atom("break");
      case StmtKind::Continue: return atom("continue");
      case StmtKind::Throw: return atom("throw");
      case StmtKind::Placeholder: return atom("placeholder");
    }
    close();
  }

  void expr(const Expr* e) {
    if (!e) return atom("_");
    switch (e->kind) {
      case ExprKind::Identifier: return atom("id " + static_cast<const Identifier&>(*e).name);
      case ExprKind::Literal: {
        const auto& l = static_cast<const Literal&>(*e);
        return atom("lit " + l.text + (l.unit.empty() ? "" : " " + l.unit));
      }
      case ExprKind::ElementaryType:
        open("type-expr");
        type(static_cast<const ElementaryTypeExpr&>(*e).type.get());
        break;
      case ExprKind::Member: {
        const auto& x = static_cast<const MemberAccess&>(*e);
        open("member " + x.member);
        expr(x.base.get());
        break;
      }
      case ExprKind::Index: {
        const auto& x = static_cast<const IndexAccess&>(*e);
        open("index");
        expr(x.base.get());
        expr(x.index.get());
        break;
      }
      case ExprKind::Call: {
        const auto& x = static_cast<const FunctionCall&>(*e);
        open("call");
        expr(x.callee.get());
        for (const auto& n : x.arg_names) atom("name " + n);
        for (const auto& a : x.args) expr(a.get());
        break;
      }
      case ExprKind::CallOptions: {
        const auto& x = static_cast<const CallOptions&>(*e);
        open("options");
        expr(x.callee.get());
        for (std::size_t i = 0; i < x.values.size(); ++i) {
          atom("name " + x.names[i]);
          expr(x.values[i].get());
        }
        break;
      }
      case ExprKind::Unary: {
        const auto& x = static_cast<const UnaryOp&>(*e);
        open((x.prefix ? "prefix " : "postfix ") + x.op);
        expr(x.operand.get());
        break;
      }
      case ExprKind::Binary: {
        const auto& x = static_cast<const BinaryOp&>(*e);
        open("binary " + x.op);
        expr(x.lhs.get());
        expr(x.rhs.get());
        break;
      }
      case ExprKind::Assign: {
        const auto& x = static_cast<const Assignment&>(*e);
        open("assign " + x.op);
        expr(x.lhs.get());
        expr(x.rhs.get());
        break;
      }
      case ExprKind::Conditional: {
        const auto& x = static_cast<const Conditional&>(*e);
        open("cond");
        expr(x.cond.get());
        expr(x.then.get());
        expr(x.otherwise.get());
        break;
      }
      case ExprKind::Tuple:
        open("tuple");
        for (const auto& a : static_cast<const TupleExpr&>(*e).elements) expr(a.get());
        break;
      case ExprKind::New:
        open("new");
        type(static_cast<const NewExpr&>(*e).type.get());
        break;
      case ExprKind::InlineArray:
        open("array-lit");
        for (const auto& a : static_cast<const InlineArray&>(*e).elements) expr(a.get());
        break;
    }
    close();
  }

private:
  void open(const std::string& head) {
    out_ += "(" + head;
  }
  void close() { out_ += ")"; }
  void atom(const std::string& a) { out_ += " [" + a + "]"; }

  std::string out_;
};

}  // namespace

std::string dump_structure(const SourceUnit& unit) {
  Dumper d;
  d.unit(unit);
  return d.take();
}

std::string dump_structure(const Stmt& stmt) {
  Dumper d;
  d.stmt(&stmt);
  return d.take();
}

std::string dump_structure(const Expr& expr) {
  Dumper d;
  d.expr(&expr);
  return d.take();
}

bool structurally_equal(const SourceUnit& a, const SourceUnit& b) {
  return dump_structure(a) == dump_structure(b);
}

}  // namespace solfix
