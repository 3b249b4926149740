#include <doctest.h>

#include "solfix/patcher.hpp"
#include "solfix/printer.hpp"
#include "solfix/verifier.hpp"
#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;

TEST_CASE("patched victim passes") {
  auto l = load("fig2_victim");
  auto r = patch::generate_patches(*l.unit, l.findings);
  auto v = verify::verify(r.patched, l.findings);
  CHECK(v.pass);
  CHECK(v.eliminated.size() == l.findings.size());
  CHECK(v.introduced.empty());
  CHECK(v.residual.empty());
}

TEST_CASE("identity patch fails") {
  auto l = load("fig2_victim");
  auto v = verify::verify(*l.unit, l.findings);
  CHECK_FALSE(v.pass);
  CHECK(v.eliminated.empty());
  CHECK(v.residual.size() == l.findings.size());
}

TEST_CASE("a second bare send stays residual") {
  auto l = load("two_sends");
  REQUIRE(l.findings.size() == 2);
  // Fix only the first send.
  auto script = patch::fix_unhandled_exception(l.findings[0], *l.analysis, *l.unit);
  auto copy = l.unit->clone();
  patch::apply(script, copy);
  auto v = verify::verify(copy, l.findings);
  CHECK_FALSE(v.pass);
  REQUIRE(v.residual.size() == 1);
  CHECK(v.residual[0].id() == "UnhandledException:Splitter:split()#1");
  CHECK(v.eliminated == std::set<std::string>{"UnhandledException:Splitter:split()#0"});
  // The oracle: detection on the patched text sees exactly the residual.
  auto again = load_source(print(copy));
  REQUIRE(again.findings.size() == 1);
  CHECK(again.findings[0].id() == v.residual[0].id());
}

TEST_CASE("matching ignores layout") {
  auto l = load("two_sends");
  std::string spaced = corpus_source("two_sends");
  spaced.insert(spaced.find("contract"), "\n\n\n// moved down\n");
  auto v = verify::verify_text(spaced, l.findings);
  CHECK(v.eliminated.empty());
  CHECK(v.introduced.empty());
}

TEST_CASE("introduced findings fail even when unfixable") {
  auto l = load("clean");
  auto v = verify::verify_text(corpus_source("timestamp_reentrancy"), l.findings);
  CHECK_FALSE(v.pass);
  CHECK(v.introduced.size() == 1);
}

TEST_CASE("unfixable originals may remain") {
  auto l = load("non_address_param");
  auto v = verify::verify(*l.unit, l.findings);
  CHECK(v.pass);
  CHECK(v.residual.size() == 1);
  CHECK(v.pass_for("Registry"));
}

TEST_CASE("unparsable patch fails with a reason") {
  auto l = load("unhandled_send");
  auto v = verify::verify_text("contract King { function f( }", l.findings);
  CHECK_FALSE(v.pass);
  CHECK_FALSE(v.failure.empty());
  CHECK(v.residual.size() == l.findings.size());
}
