#include "solfix/parser.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace solfix {

using namespace ast;

bool is_elementary_type_name(const std::string& w) {
  static const std::set<std::string> kFixed = {"address", "bool",  "string", "bytes", "byte",
                                               "uint",    "int",   "fixed",  "ufixed"};
  if (kFixed.count(w)) return true;
  static const std::regex kSized(R"((u?int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|136|144|152|160|168|176|184|192|200|208|216|224|232|240|248|256))|(bytes([1-9]|[12][0-9]|3[0-2])))");
  return std::regex_match(w, kSized);
}

namespace {

const std::set<std::string> kUnits = {"wei",     "gwei",  "szabo", "finney", "ether", "seconds",
                                      "minutes", "hours", "days",  "weeks",  "years"};

int binary_precedence(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return 0;
}

bool is_assignment_op(const std::string& op) {
  static const std::set<std::string> kOps = {"=",  "+=", "-=",  "*=",  "/=", "%=",
                                             "|=", "&=", "^=", "<<=", ">>="};
  return kOps.count(op) > 0;
}

class Parser {
public:
  Parser(std::string source, std::string path) {
    unit_.source = std::move(source);
    unit_.path = std::move(path);
    toks_ = tokenize(unit_.source);
  }

  /// Parses a snippet with `f`, drawing node ids from `ids`. Spans are
  /// marked synthetic.
  template <typename F>
  auto fragment(IdGen& ids, F f) {
    synthetic_ = true;
    unit_.ids = ids;
    auto out = f(*this);
    if (!at_end()) fail("end of input");
    ids = unit_.ids;
    return out;
  }

  StmtPtr statement_fragment() { return statement(); }
  ExprPtr expression_fragment() { return expression(); }
  MemberPtr member_fragment(const std::string& contract_name) {
    ContractDef owner;
    owner.name = contract_name;
    return member(owner);
  }

  SourceUnit run() {
    while (!at_end()) {
      if (peek().is("pragma")) {
        advance();
        if (peek().kind != TokenKind::PragmaBody) fail("pragma body");
        unit_.pragmas.push_back(advance().text);
        expect(";");
      } else if (peek().is("import")) {
        unsupported("import directive");
      } else if (peek().is("contract") || peek().is("library") || peek().is("interface") ||
                 peek().is("abstract")) {
        unit_.contracts.push_back(contract());
      } else if (peek().is("function") || peek().is("struct") || peek().is("enum") ||
                 peek().is("error") || peek().is("using")) {
        unsupported("file-level " + peek().text);
      } else {
        fail("'contract', 'library', 'interface' or 'pragma'",
             {"contract", "library", "interface", "pragma"});
      }
    }
    auto v = unit_.version();
    if (v.at_least(0, 7))
      throw UnsupportedConstruct("pragma solidity " + std::to_string(v.major) + "." +
                                     std::to_string(v.minor),
                                 1, 1);
    return std::move(unit_);
  }

private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  const Token& advance() {
    const Token& t = toks_[pos_];
    prev_end_ = t.end;
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool accept(const char* s) {
    if (peek().is(s)) {
      advance();
      return true;
    }
    return false;
  }

  const Token& expect(const char* s) {
    if (!peek().is(s)) fail(std::string("'") + s + "'", {s});
    return advance();
  }

  std::string identifier(const char* what = "identifier") {
    if (peek().kind != TokenKind::Identifier) fail(what, {what});
    return advance().text;
  }

  [[noreturn]] void fail(const std::string& expected, std::vector<std::string> set = {}) {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    if (set.empty()) set.push_back(expected);
    throw SyntaxError("expected " + expected + ", found " + found, t.line, t.column,
                      std::move(set));
  }

  [[noreturn]] void unsupported(const std::string& what) {
    throw UnsupportedConstruct(what, peek().line, peek().column);
  }

  template <typename T>
  T& begin_node(T& n) {
    n.id = unit_.fresh_id();
    if (synthetic_)
      n.span = Span::synthesized();
    else
      n.span.begin = peek().begin;
    return n;
  }
  template <typename T>
  void end_node(T& n) {
    if (!synthetic_) n.span.end = prev_end_;
  }
  template <typename T>
  std::unique_ptr<T> make() {
    auto n = std::make_unique<T>();
    begin_node(*n);
    return n;
  }

  // Restores token position and id counter for speculative parses.
  struct Mark {
    std::size_t pos;
    std::uint32_t prev_end;
    IdGen ids;
  };
  Mark mark() const { return Mark{pos_, prev_end_, unit_.ids}; }
  void reset(const Mark& m) {
    pos_ = m.pos;
    prev_end_ = m.prev_end;
    unit_.ids = m.ids;
  }

  // -- contracts ------------------------------------------------------------

  ContractPtr contract() {
    auto c = std::make_unique<ContractDef>();
    begin_node(*c);
    if (accept("abstract")) c->is_abstract = true;
    if (accept("contract")) {
      c->kind = ContractKind::Contract;
    } else if (accept("library")) {
      c->kind = ContractKind::Library;
    } else if (accept("interface")) {
      c->kind = ContractKind::Interface;
    } else {
      fail("'contract'", {"contract", "library", "interface"});
    }
    c->name = identifier("contract name");
    if (accept("is")) {
      do {
        InheritanceSpec spec;
        begin_node(spec);
        spec.name = identifier("base contract name");
        while (accept(".")) spec.name += "." + identifier();
        if (peek().is("(")) {
          spec.has_args = true;
          spec.args = call_args(nullptr);
        }
        end_node(spec);
        c->bases.push_back(std::move(spec));
      } while (accept(","));
      if (c->bases.size() > 1) {
        throw UnsupportedConstruct("multiple inheritance in '" + c->name + "'",
                                   peek().line, peek().column);
      }
    }
    expect("{");
    while (!peek().is("}")) {
      if (at_end()) fail("'}'", {"}"});
      c->members.push_back(member(*c));
    }
    expect("}");
    end_node(*c);
    return c;
  }

  MemberPtr member(const ContractDef& owner) {
    const Token& t = peek();
    if (t.is("function")) return function(owner);
    if (t.is("constructor") && peek(1).is("(")) return special_function(FunctionKind::Constructor);
    if (t.is("fallback") && peek(1).is("(")) return special_function(FunctionKind::Fallback);
    if (t.is("receive") && peek(1).is("(")) return special_function(FunctionKind::Receive);
    if (t.is("modifier")) return modifier();
    if (t.is("struct")) return struct_def();
    if (t.is("enum")) return enum_def();
    if (t.is("event")) return event_def();
    if (t.is("using")) return using_for();
    if (t.is("error")) unsupported("custom error definition");
    return state_var();
  }

  void function_attributes(FunctionDef& f) {
    while (true) {
      const Token& t = peek();
      if (t.is("public")) {
        advance();
        f.visibility = Visibility::Public;
      } else if (t.is("external")) {
        advance();
        f.visibility = Visibility::External;
      } else if (t.is("internal")) {
        advance();
        f.visibility = Visibility::Internal;
      } else if (t.is("private")) {
        advance();
        f.visibility = Visibility::Private;
      } else if (t.is("payable")) {
        advance();
        f.mutability = Mutability::Payable;
      } else if (t.is("view")) {
        advance();
        f.mutability = Mutability::View;
      } else if (t.is("pure")) {
        advance();
        f.mutability = Mutability::Pure;
      } else if (t.is("constant")) {
        advance();
        f.mutability = Mutability::Constant;
      } else if (t.is("virtual")) {
        advance();
        f.is_virtual = true;
      } else if (t.is("override")) {
        advance();
        f.overrides = override_list();
      } else if (t.kind == TokenKind::Identifier && !t.is("returns")) {
        ModifierInvocation inv;
        begin_node(inv);
        inv.name = advance().text;
        while (accept(".")) inv.name += "." + identifier();
        if (peek().is("(")) {
          inv.has_args = true;
          inv.args = call_args(nullptr);
        }
        end_node(inv);
        f.modifiers.push_back(std::move(inv));
      } else {
        break;
      }
    }
  }

  std::vector<std::string> override_list() {
    std::vector<std::string> names;
    if (accept("(")) {
      do {
        std::string n = identifier();
        while (accept(".")) n += "." + identifier();
        names.push_back(n);
      } while (accept(","));
      expect(")");
    }
    return names;
  }

  void function_tail(FunctionDef& f) {
    function_attributes(f);
    if (accept("returns")) {
      f.has_returns = true;
      f.returns = parameter_list(false);
    }
    if (!accept(";")) f.body = block();
  }

  MemberPtr function(const ContractDef& owner) {
    auto f = make<FunctionDef>();
    expect("function");
    if (peek().kind == TokenKind::Identifier) {
      f->name = advance().text;
      if (f->name == owner.name) {
        f->function_kind = FunctionKind::Constructor;
        f->legacy_form = true;
      }
    } else {
      f->function_kind = FunctionKind::Fallback;
      f->legacy_form = true;
    }
    f->params = parameter_list(false);
    function_tail(*f);
    end_node(*f);
    return f;
  }

  MemberPtr special_function(FunctionKind kind) {
    auto f = make<FunctionDef>();
    advance();
    f->function_kind = kind;
    f->params = parameter_list(false);
    function_tail(*f);
    end_node(*f);
    return f;
  }

  MemberPtr modifier() {
    auto m = make<ModifierDef>();
    expect("modifier");
    m->name = identifier("modifier name");
    if (peek().is("(")) {
      m->has_params = true;
      m->params = parameter_list(false);
    }
    while (true) {
      if (accept("virtual")) {
        m->is_virtual = true;
      } else if (accept("override")) {
        m->overrides = override_list();
      } else {
        break;
      }
    }
    m->body = block();
    end_node(*m);
    return m;
  }

  MemberPtr struct_def() {
    auto s = make<StructDef>();
    expect("struct");
    s->name = identifier("struct name");
    expect("{");
    while (!accept("}")) {
      auto d = std::make_unique<VarDecl>();
      begin_node(*d);
      d->type = type_name();
      d->name = identifier("field name");
      end_node(*d);
      expect(";");
      s->fields.push_back(std::move(d));
    }
    end_node(*s);
    return s;
  }

  MemberPtr enum_def() {
    auto e = make<EnumDef>();
    expect("enum");
    e->name = identifier("enum name");
    expect("{");
    if (!peek().is("}")) {
      do {
        e->values.push_back(identifier("enum value"));
      } while (accept(","));
    }
    expect("}");
    end_node(*e);
    return e;
  }

  MemberPtr event_def() {
    auto e = make<EventDef>();
    expect("event");
    e->name = identifier("event name");
    e->params = parameter_list(true);
    if (accept("anonymous")) e->anonymous = true;
    expect(";");
    end_node(*e);
    return e;
  }

  MemberPtr using_for() {
    auto u = make<UsingFor>();
    expect("using");
    u->library = identifier("library name");
    while (accept(".")) u->library += "." + identifier();
    expect("for");
    if (!accept("*")) u->type = type_name();
    expect(";");
    end_node(*u);
    return u;
  }

  MemberPtr state_var() {
    auto sv = make<StateVarDef>();
    auto d = std::make_unique<VarDecl>();
    begin_node(*d);
    d->type = type_name();
    d->location = DataLocation::Storage;
    while (true) {
      const Token& t = peek();
      if (t.is("public")) {
        sv->visibility = Visibility::Public;
      } else if (t.is("private")) {
        sv->visibility = Visibility::Private;
      } else if (t.is("internal")) {
        sv->visibility = Visibility::Internal;
      } else if (t.is("constant")) {
        sv->constant = true;
      } else if (t.is("immutable")) {
        sv->immutable = true;
      } else if (t.is("override")) {
        advance();
        override_list();
        continue;
      } else {
        break;
      }
      advance();
    }
    d->name = identifier("state variable name");
    end_node(*d);
    sv->var = std::move(d);
    if (accept("=")) sv->init = expression();
    expect(";");
    end_node(*sv);
    return sv;
  }

  std::vector<VarDeclPtr> parameter_list(bool event) {
    std::vector<VarDeclPtr> out;
    expect("(");
    if (accept(")")) return out;
    do {
      auto d = std::make_unique<VarDecl>();
      begin_node(*d);
      d->type = type_name();
      if (event && accept("indexed")) d->indexed = true;
      d->location = data_location();
      if (peek().kind == TokenKind::Identifier) d->name = advance().text;
      end_node(*d);
      out.push_back(std::move(d));
    } while (accept(","));
    expect(")");
    return out;
  }

  DataLocation data_location() {
    if (accept("storage")) return DataLocation::Storage;
    if (accept("memory")) return DataLocation::Memory;
    if (accept("calldata")) return DataLocation::Calldata;
    return DataLocation::Default;
  }

  // -- types ------------------------------------------------------------------

  TypePtr type_name() {
    auto t = std::make_unique<TypeName>();
    begin_node(*t);
    const Token& tok = peek();
    if (tok.is("mapping")) {
      advance();
      t->kind = TypeKind::Mapping;
      expect("(");
      t->key = type_name();
      expect("=>");
      t->value = type_name();
      expect(")");
    } else if (tok.is("function")) {
      unsupported("function type");
    } else if (tok.kind == TokenKind::Identifier && is_elementary_type_name(tok.text)) {
      t->kind = TypeKind::Elementary;
      t->name = advance().text;
      if (t->name == "address" && accept("payable")) t->payable = true;
    } else if (tok.kind == TokenKind::Identifier) {
      t->kind = TypeKind::UserDefined;
      t->name = advance().text;
      while (accept(".")) t->name += "." + identifier();
    } else {
      fail("type name");
    }
    end_node(*t);
    while (peek().is("[")) {
      auto arr = std::make_unique<TypeName>();
      arr->id = unit_.fresh_id();
      arr->span.begin = t->span.begin;
      advance();
      arr->kind = TypeKind::Array;
      if (!peek().is("]")) arr->length = expression();
      expect("]");
      arr->value = std::move(t);
      end_node(*arr);
      t = std::move(arr);
    }
    return t;
  }

  // -- statements -------------------------------------------------------------

  std::unique_ptr<Block> block() {
    auto b = make<Block>();
    expect("{");
    while (!peek().is("}")) {
      if (at_end()) fail("'}'", {"}"});
      b->statements.push_back(statement());
    }
    expect("}");
    end_node(*b);
    return b;
  }

  StmtPtr statement() {
    const Token& t = peek();
    if (t.is("{")) return block();
    if (t.is("if")) return if_stmt();
    if (t.is("for")) return for_stmt();
    if (t.is("while")) return while_stmt();
    if (t.is("do")) return do_while_stmt();
    if (t.is("return")) {
      auto r = make<ReturnStmt>();
      advance();
      if (!peek().is(";")) r->value = expression();
      expect(";");
      end_node(*r);
      return r;
    }
    if (t.is("break") || t.is("continue") || t.is("throw")) {
      auto kind = t.is("break") ? StmtKind::Break
                  : t.is("continue") ? StmtKind::Continue
                                     : StmtKind::Throw;
      auto s = std::make_unique<SimpleStmt>(kind);
      begin_node(*s);
      advance();
      expect(";");
      end_node(*s);
      return s;
    }
    if (t.is("_") && peek(1).is(";")) {
      auto s = std::make_unique<SimpleStmt>(StmtKind::Placeholder);
      begin_node(*s);
      advance();
      advance();
      end_node(*s);
      return s;
    }
    if (t.is("emit")) {
      auto e = make<EmitStmt>();
      advance();
      e->call = expression();
      expect(";");
      end_node(*e);
      return e;
    }
    if (t.is("assembly")) unsupported("inline assembly");
    if (t.is("try")) unsupported("try/catch");
    if (t.is("unchecked")) unsupported("unchecked block");
    if (t.is("revert") && peek(1).kind == TokenKind::Identifier) unsupported("custom error revert");
    return simple_statement();
  }

  /// Variable declaration or expression statement, terminated by ';'.
  StmtPtr simple_statement() {
    if (auto decl = try_var_decl()) {
      expect(";");
      end_node(*decl);
      return decl;
    }
    auto s = make<ExprStmt>();
    s->expr = expression();
    expect(";");
    end_node(*s);
    return s;
  }

  std::unique_ptr<VarDeclStmt> try_var_decl() {
    const Token& t = peek();
    if (t.is("var")) {
      auto s = make<VarDeclStmt>();
      advance();
      if (peek().is("(")) {
        s->tuple = true;
        advance();
        do {
          if (peek().kind == TokenKind::Identifier) {
            auto d = std::make_unique<VarDecl>();
            begin_node(*d);
            d->name = advance().text;
            end_node(*d);
            s->decls.push_back(std::move(d));
          } else {
            s->decls.push_back(nullptr);
          }
        } while (accept(","));
        expect(")");
      } else {
        auto d = std::make_unique<VarDecl>();
        begin_node(*d);
        d->name = identifier("variable name");
        end_node(*d);
        s->decls.push_back(std::move(d));
      }
      if (accept("=")) s->init = expression();
      return s;
    }
    if (t.is("(")) return try_tuple_decl();
    if (t.kind != TokenKind::Identifier) return nullptr;
    if (is_elementary_type_name(t.text) && peek(1).is("(")) return nullptr;
    if (t.is("payable") || t.is("new") || t.is("delete")) return nullptr;

    Mark m = mark();
    auto s = std::make_unique<VarDeclStmt>();
    begin_node(*s);
    auto d = std::make_unique<VarDecl>();
    begin_node(*d);
    try {
      d->type = type_name();
    } catch (const SyntaxError&) {
      reset(m);
      return nullptr;
    }
    if (peek().kind != TokenKind::Identifier) {
      reset(m);
      return nullptr;
    }
    d->location = data_location();
    d->name = identifier("variable name");
    end_node(*d);
    s->decls.push_back(std::move(d));
    if (accept("=")) s->init = expression();
    return s;
  }

  std::unique_ptr<VarDeclStmt> try_tuple_decl() {
    Mark m = mark();
    auto s = std::make_unique<VarDeclStmt>();
    begin_node(*s);
    s->tuple = true;
    advance();  // (
    bool any = false;
    try {
      do {
        if (peek().is(",") || peek().is(")")) {
          s->decls.push_back(nullptr);
          continue;
        }
        auto d = std::make_unique<VarDecl>();
        begin_node(*d);
        d->type = type_name();
        if (peek().kind != TokenKind::Identifier) throw SyntaxError("not a declaration", 0, 0);
        d->location = data_location();
        d->name = identifier();
        end_node(*d);
        s->decls.push_back(std::move(d));
        any = true;
      } while (accept(","));
      if (!accept(")") || !any || !peek().is("=")) throw SyntaxError("not a declaration", 0, 0);
    } catch (const SyntaxError&) {
      reset(m);
      return nullptr;
    }
    expect("=");
    s->init = expression();
    return s;
  }

  StmtPtr if_stmt() {
    auto s = make<IfStmt>();
    expect("if");
    expect("(");
    s->cond = expression();
    expect(")");
    s->then = statement();
    if (accept("else")) s->otherwise = statement();
    end_node(*s);
    return s;
  }

  StmtPtr for_stmt() {
    auto s = make<ForStmt>();
    expect("for");
    expect("(");
    if (!accept(";")) s->init = simple_statement();
    if (!peek().is(";")) s->cond = expression();
    expect(";");
    if (!peek().is(")")) s->post = expression();
    expect(")");
    s->body = statement();
    end_node(*s);
    return s;
  }

  StmtPtr while_stmt() {
    auto s = make<WhileStmt>();
    expect("while");
    expect("(");
    s->cond = expression();
    expect(")");
    s->body = statement();
    end_node(*s);
    return s;
  }

  StmtPtr do_while_stmt() {
    auto s = make<DoWhileStmt>();
    expect("do");
    s->body = statement();
    expect("while");
    expect("(");
    s->cond = expression();
    expect(")");
    expect(";");
    end_node(*s);
    return s;
  }

  // -- expressions ------------------------------------------------------------

  ExprPtr expression() {
    std::uint32_t begin = peek().begin;
    ExprPtr lhs = ternary();
    if (peek().kind == TokenKind::Punct && is_assignment_op(peek().text)) {
      auto a = std::make_unique<Assignment>();
      a->id = unit_.fresh_id();
      a->span.begin = begin;
      a->op = advance().text;
      a->lhs = std::move(lhs);
      a->rhs = expression();
      end_node(*a);
      return a;
    }
    return lhs;
  }

  ExprPtr ternary() {
    std::uint32_t begin = peek().begin;
    ExprPtr cond = binary(1);
    if (!peek().is("?")) return cond;
    advance();
    auto c = std::make_unique<Conditional>();
    c->id = unit_.fresh_id();
    c->span.begin = begin;
    c->cond = std::move(cond);
    c->then = expression();
    expect(":");
    c->otherwise = ternary();
    end_node(*c);
    return c;
  }

  ExprPtr binary(int min_prec) {
    std::uint32_t begin = peek().begin;
    ExprPtr lhs = unary();
    while (true) {
      const Token& t = peek();
      if (t.kind != TokenKind::Punct) break;
      int prec = binary_precedence(t.text);
      if (prec == 0 || prec < min_prec) break;
      auto b = std::make_unique<BinaryOp>();
      b->id = unit_.fresh_id();
      b->span.begin = begin;
      b->op = advance().text;
      b->lhs = std::move(lhs);
      // `**` is right associative
      b->rhs = binary(b->op == "**" ? prec : prec + 1);
      end_node(*b);
      lhs = std::move(b);
    }
    return lhs;
  }

  ExprPtr unary() {
    const Token& t = peek();
    if (t.is("!") || t.is("~") || t.is("-") || t.is("+") || t.is("++") || t.is("--") ||
        t.is("delete")) {
      auto u = make<UnaryOp>();
      u->op = advance().text;
      u->prefix = true;
      u->operand = unary();
      end_node(*u);
      return u;
    }
    return postfix();
  }

  std::vector<ExprPtr> call_args(std::vector<std::string>* names) {
    std::vector<ExprPtr> args;
    expect("(");
    if (peek().is("{") && names) {
      advance();
      if (!peek().is("}")) {
        do {
          names->push_back(identifier("argument name"));
          expect(":");
          args.push_back(expression());
        } while (accept(","));
      }
      expect("}");
      expect(")");
      return args;
    }
    if (!peek().is(")")) {
      do {
        args.push_back(expression());
      } while (accept(","));
    }
    expect(")");
    return args;
  }

  ExprPtr postfix() {
    std::uint32_t begin = peek().begin;
    ExprPtr e = primary();
    while (true) {
      const Token& t = peek();
      if (t.is(".")) {
        advance();
        auto m = std::make_unique<MemberAccess>();
        m->id = unit_.fresh_id();
        m->span.begin = begin;
        m->base = std::move(e);
        m->member = identifier("member name");
        end_node(*m);
        e = std::move(m);
      } else if (t.is("[")) {
        advance();
        auto ix = std::make_unique<IndexAccess>();
        ix->id = unit_.fresh_id();
        ix->span.begin = begin;
        ix->base = std::move(e);
        if (!peek().is("]")) ix->index = expression();
        if (peek().is(":")) unsupported("array slice");
        expect("]");
        end_node(*ix);
        e = std::move(ix);
      } else if (t.is("(")) {
        auto c = std::make_unique<FunctionCall>();
        c->id = unit_.fresh_id();
        c->span.begin = begin;
        c->callee = std::move(e);
        c->args = call_args(&c->arg_names);
        end_node(*c);
        e = std::move(c);
      } else if (t.is("{") && peek(1).kind == TokenKind::Identifier && peek(2).is(":")) {
        advance();
        auto o = std::make_unique<CallOptions>();
        o->id = unit_.fresh_id();
        o->span.begin = begin;
        o->callee = std::move(e);
        do {
          o->names.push_back(identifier("call option"));
          expect(":");
          o->values.push_back(expression());
        } while (accept(","));
        expect("}");
        end_node(*o);
        e = std::move(o);
      } else if (t.is("++") || t.is("--")) {
        auto u = std::make_unique<UnaryOp>();
        u->id = unit_.fresh_id();
        u->span.begin = begin;
        u->op = advance().text;
        u->prefix = false;
        u->operand = std::move(e);
        end_node(*u);
        e = std::move(u);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.is("(")) {
      auto tup = make<TupleExpr>();
      advance();
      if (!peek().is(")")) {
        do {
          if (peek().is(",") || peek().is(")"))
            tup->elements.push_back(nullptr);
          else
            tup->elements.push_back(expression());
        } while (accept(","));
      }
      expect(")");
      end_node(*tup);
      return tup;
    }
    if (t.is("[")) {
      auto arr = make<InlineArray>();
      advance();
      if (!peek().is("]")) {
        do {
          arr->elements.push_back(expression());
        } while (accept(","));
      }
      expect("]");
      end_node(*arr);
      return arr;
    }
    if (t.kind == TokenKind::Number) {
      auto lit = make<Literal>();
      lit->literal = LiteralKind::Number;
      lit->text = advance().text;
      if (peek().kind == TokenKind::Identifier && kUnits.count(peek().text))
        lit->unit = advance().text;
      end_node(*lit);
      return lit;
    }
    if (t.kind == TokenKind::String || t.kind == TokenKind::HexString) {
      auto lit = make<Literal>();
      lit->literal = t.kind == TokenKind::String ? LiteralKind::String : LiteralKind::HexString;
      lit->text = advance().text;
      end_node(*lit);
      return lit;
    }
    if (t.is("true") || t.is("false")) {
      auto lit = make<Literal>();
      lit->literal = LiteralKind::Bool;
      lit->text = advance().text;
      end_node(*lit);
      return lit;
    }
    if (t.is("new")) {
      auto n = make<NewExpr>();
      advance();
      n->type = type_name();
      end_node(*n);
      return n;
    }
    if (t.is("function")) unsupported("function type");
    if (t.is("assembly")) unsupported("inline assembly");
    if (t.kind == TokenKind::Identifier &&
        (is_elementary_type_name(t.text) || (t.text == "payable" && peek(1).is("(")))) {
      auto e = make<ElementaryTypeExpr>();
      auto ty = std::make_unique<TypeName>();
      begin_node(*ty);
      ty->kind = TypeKind::Elementary;
      ty->name = advance().text;
      if (ty->name == "address" && peek().is("payable") && !peek(1).is("(")) {
        advance();
        ty->payable = true;
      }
      end_node(*ty);
      e->type = std::move(ty);
      end_node(*e);
      return e;
    }
    if (t.kind == TokenKind::Identifier) {
      auto id = make<Identifier>();
      id->name = advance().text;
      end_node(*id);
      return id;
    }
    fail("expression");
  }

  SourceUnit unit_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::uint32_t prev_end_ = 0;
  bool synthetic_ = false;
};

}  // namespace

ast::SourceUnit parse(std::string source, std::string path) {
  return Parser(std::move(source), std::move(path)).run();
}

ast::StmtPtr parse_statement(const std::string& text, ast::IdGen& ids) {
  return Parser(text, "<fragment>").fragment(ids, [](Parser& p) {
    return p.statement_fragment();
  });
}

ast::ExprPtr parse_expression(const std::string& text, ast::IdGen& ids) {
  return Parser(text, "<fragment>").fragment(ids, [](Parser& p) {
    return p.expression_fragment();
  });
}

ast::MemberPtr parse_member(const std::string& text, ast::IdGen& ids,
                            const std::string& contract_name) {
  return Parser(text, "<fragment>").fragment(ids, [&](Parser& p) {
    return p.member_fragment(contract_name);
  });
}

}  // namespace solfix
