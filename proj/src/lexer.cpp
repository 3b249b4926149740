#include "solfix/lexer.hpp"

#include <array>
#include <cctype>

namespace solfix {

SyntaxError::SyntaxError(std::string message, std::uint32_t line, std::uint32_t column,
                         std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

UnsupportedConstruct::UnsupportedConstruct(std::string construct, std::uint32_t line,
                                           std::uint32_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": unsupported construct: " + construct),
      construct_(std::move(construct)),
      line_(line),
      column_(column) {}

namespace {

// Longest first so that maximal munch works with a linear scan.
constexpr std::array<std::string_view, 47> kPunct = {
    ">>>=", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=",   "*=",  "/=",  "%=", "|=", "&=", "^=", "<<", ">>", "=>", "->", "(",  ")",
    "{",    "}",   "[",   "]",  ";",  ",",  ".",  "?",  ":",  "=",  "+",  "-",  "*",
    "/",    "%",   "!",   "~",  "&",  "|",  "^",  "<",
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool pragma_pending = false;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      if (pragma_pending) {
        out.push_back(pragma_body());
        pragma_pending = false;
        continue;
      }
      Token t = next();
      if (t.kind == TokenKind::Identifier && t.text == "pragma") pragma_pending = true;
      out.push_back(std::move(t));
    }
    Token end;
    end.kind = TokenKind::End;
    end.begin = end.end = static_cast<std::uint32_t>(src_.size());
    end.line = line_;
    end.column = col_;
    out.push_back(end);
    return out;
  }

private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        auto l = line_, cl = col_;
        advance(2);
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw SyntaxError("unterminated block comment", l, cl);
        advance(2);
      } else {
        break;
      }
    }
  }

  Token start(TokenKind kind) {
    Token t;
    t.kind = kind;
    t.begin = static_cast<std::uint32_t>(pos_);
    t.line = line_;
    t.column = col_;
    return t;
  }

  void finish(Token& t) {
    t.end = static_cast<std::uint32_t>(pos_);
    t.text = std::string(src_.substr(t.begin, t.end - t.begin));
  }

  Token pragma_body() {
    Token t = start(TokenKind::PragmaBody);
    while (pos_ < src_.size() && peek() != ';') advance();
    if (pos_ >= src_.size()) throw SyntaxError("unterminated pragma", t.line, t.column, {";"});
    finish(t);
    while (!t.text.empty() && std::isspace(static_cast<unsigned char>(t.text.back())))
      t.text.pop_back();
    return t;
  }

  Token string_literal(TokenKind kind) {
    Token t = start(kind);
    if (kind == TokenKind::HexString) advance(3);  // hex
    char quote = peek();
    advance();
    while (pos_ < src_.size() && peek() != quote) {
      if (peek() == '\\') advance();
      if (peek() == '\n') throw SyntaxError("newline in string literal", line_, col_);
      advance();
    }
    if (pos_ >= src_.size()) throw SyntaxError("unterminated string literal", t.line, t.column);
    advance();
    finish(t);
    return t;
  }

  Token next() {
    char c = peek();
    if (c == 'h' && src_.substr(pos_, 3) == "hex" && (peek(3) == '"' || peek(3) == '\''))
      return string_literal(TokenKind::HexString);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      Token t = start(TokenKind::Identifier);
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '$')
        advance();
      finish(t);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      Token t = start(TokenKind::Number);
      if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
        advance(2);
        while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
          advance();
          while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             (peek(1) == '-' && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
          advance(2);
          while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        }
      }
      finish(t);
      return t;
    }
    if (c == '"' || c == '\'') return string_literal(TokenKind::String);
    for (auto p : kPunct) {
      if (src_.substr(pos_, p.size()) == p) {
        Token t = start(TokenKind::Punct);
        advance(p.size());
        finish(t);
        return t;
      }
    }
    if (c == '>') {
      Token t = start(TokenKind::Punct);
      advance();
      finish(t);
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace solfix
