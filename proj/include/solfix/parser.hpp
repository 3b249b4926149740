#pragma once

#include <string>

#include "solfix/ast.hpp"
#include "solfix/lexer.hpp"

namespace solfix {

/// Parses one Solidity source file.
///
/// Throws SyntaxError for malformed input and UnsupportedConstruct for valid
/// Solidity outside the supported dialect (inline assembly, try/catch,
/// imports, multiple inheritance, function types, pragma >= 0.7).
ast::SourceUnit parse(std::string source, std::string path = "<input>");

/// Snippet parsers for synthesized code. Ids come from `ids` (normally the
/// target unit's generator) and every span is synthetic.
ast::StmtPtr parse_statement(const std::string& text, ast::IdGen& ids);
ast::ExprPtr parse_expression(const std::string& text, ast::IdGen& ids);
ast::MemberPtr parse_member(const std::string& text, ast::IdGen& ids,
                            const std::string& contract_name);

/// True for keywords that name an elementary type (`uint8`, `address`, ...).
bool is_elementary_type_name(const std::string& word);

}  // namespace solfix
