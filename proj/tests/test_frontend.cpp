#include <doctest.h>

#include "solfix/ast_walk.hpp"
#include "solfix/parser.hpp"
#include "solfix/printer.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;

TEST_CASE("every corpus file survives parse, print, parse") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    auto first = parse(corpus_source(name), name);
    std::string text = print(first);
    auto second = parse(text, name);
    CHECK(structurally_equal(first, second));
    CHECK(print(second) == text);
  }
}

TEST_CASE("printer canonicalizes layout") {
  auto unit = parse("pragma solidity ^0.4.24; contract A{uint x;function f()public{if(x>0)x=1;else{x=2;}}}");
  CHECK(print(unit) ==
        "pragma solidity ^0.4.24;\n"
        "\n"
        "contract A {\n"
        "    uint x;\n"
        "\n"
        "    function f() public {\n"
        "        if (x > 0)\n"
        "            x = 1;\n"
        "        else {\n"
        "            x = 2;\n"
        "        }\n"
        "    }\n"
        "}\n");
}

TEST_CASE("pragma lower bound") {
  CHECK(parse("pragma solidity ^0.4.24; contract A {}").version().at_least(0, 4, 24));
  CHECK_FALSE(parse("pragma solidity ^0.4.24; contract A {}").version().at_least(0, 5));
  CHECK(parse("pragma solidity >=0.5.0 <0.7.0; contract A {}").version().at_least(0, 5));
  CHECK_FALSE(parse("contract A {}").version().at_least(0, 4, 1));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse("contract A {\n  function f() public {\n    x = ;\n  }\n}");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("constructs outside the dialect are rejected") {
  const char* cases[] = {
      "import \"a.sol\"; contract A {}",
      "contract A { function f() public { assembly { } } }",
      "pragma solidity ^0.7.0; contract A {}",
      "contract A {} contract B {} contract C is A, B {}",
  };
  for (const char* src : cases) {
    CAPTURE(src);
    CHECK_THROWS_AS(parse(src), UnsupportedConstruct);
  }
}

TEST_CASE("signatures use canonical type names") {
  auto unit = parse("contract A { function f(uint a, address b, bytes32 c) public {} }");
  CHECK(unit.contracts[0]->find_function("f")->signature() == "f(uint256,address,bytes32)");
}

TEST_CASE("snippets get fresh ids and synthetic spans") {
  auto unit = parse("contract A { uint x; }");
  std::uint32_t next = unit.ids.peek();
  auto s = parse_statement("require(x > 0);", unit.ids);
  CHECK(ast::raw(s->id) >= next);
  CHECK(s->span.synthetic);
  CHECK(print_stmt(*s) == "require(x > 0);");
  auto e = parse_expression("a.b[c]", unit.ids);
  CHECK(print_expr(*e) == "a.b[c]");
  auto m = parse_member("bool private locked;", unit.ids, "A");
  CHECK(m->kind == ast::MemberKind::StateVar);
}

TEST_CASE("clone keeps ids and structure") {
  auto unit = parse(corpus_source("vesting"));
  auto copy = unit.clone();
  CHECK(structurally_equal(unit, copy));
  CHECK(copy.contracts[1]->find_function("addVesting")->id ==
        unit.contracts[1]->find_function("addVesting")->id);
  CHECK(copy.ids.peek() == unit.ids.peek());
}

TEST_CASE("value transfer forms classify by kind") {
  auto l = load_source(
      "pragma solidity ^0.6.0;\n"
      "contract T { function g() external {} }\n"
      "contract A {\n"
      "  T t;\n"
      "  function f(address payable a) public {\n"
      "    a.send(1); a.transfer(1); a.call{value: 1}(\"\"); a.call(\"\"); t.g(); h(); require(true);\n"
      "  }\n"
      "  function h() internal {}\n"
      "}\n");
  const auto* fn = l.function("A", "f");
  std::vector<sema::CallKind> kinds;
  std::vector<bool> low_level;
  ast::walk_stmt_exprs(*fn->body, [&](const ast::Expr& e) {
    if (e.kind == ast::ExprKind::Call) {
      auto ci = l.analysis->program.classify(static_cast<const ast::FunctionCall&>(e));
      if (!ci.option_setter) {
        kinds.push_back(ci.kind);
        low_level.push_back(ci.low_level);
      }
    }
    return true;
  });
  using K = sema::CallKind;
  REQUIRE(kinds.size() == 7);
  CHECK(kinds[0] == K::EtherSend);
  CHECK(kinds[1] == K::EtherTransfer);
  CHECK(kinds[2] == K::EtherCallValue);
  CHECK(kinds[3] == K::ExternalContract);
  CHECK(low_level[3]);
  CHECK(kinds[4] == K::ExternalContract);
  CHECK_FALSE(low_level[4]);
  CHECK(kinds[5] == K::Internal);
  CHECK(kinds[6] == K::Internal);
}
