#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solfix {

enum class TokenKind { Identifier, Number, String, HexString, Punct, PragmaBody, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  bool is(std::string_view s) const {
    return (kind == TokenKind::Identifier || kind == TokenKind::Punct) && text == s;
  }
};

/// Malformed input. Carries the position and, when known, the set of tokens
/// that would have been accepted.
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(std::string message, std::uint32_t line, std::uint32_t column,
              std::vector<std::string> expected = {});

  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::uint32_t line_;
  std::uint32_t column_;
  std::vector<std::string> expected_;
};

/// Well-formed Solidity that falls outside the supported subset.
class UnsupportedConstruct : public std::runtime_error {
public:
  UnsupportedConstruct(std::string construct, std::uint32_t line, std::uint32_t column);

  const std::string& construct() const { return construct_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }

private:
  std::string construct_;
  std::uint32_t line_;
  std::uint32_t column_;
};

/// Splits source text into tokens. Comments and whitespace are dropped;
/// the body of a `pragma` directive is returned as one PragmaBody token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace solfix
