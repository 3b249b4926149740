#include <doctest.h>

#include "support.hpp"

using namespace solfix;
using namespace solfix::testing;
using detect::Strategy;
using detect::UnfixableReason;
using detect::VulnClass;

namespace {

std::vector<std::string> ids(const Loaded& l) {
  std::vector<std::string> out;
  for (const auto& f : l.findings) out.push_back(f.id());
  return out;
}

}  // namespace

TEST_CASE("send-site reentrancy and unhandled call in the victim") {
  auto l = load("fig2_victim");
  auto re = l.of(VulnClass::Reentrancy);
  REQUIRE(re.size() == 1);
  CHECK(re[0]->id() == "Reentrancy:Victim:refund()#0");
  CHECK(re[0]->fixable);
  CHECK(re[0]->votes.size() == 3);
  CHECK(re[0]->site.description == "msg.sender.call.value(userBalances[msg.sender])()");
  CHECK(l.of(VulnClass::UnhandledException).size() == 1);
  CHECK(l.of(VulnClass::MissingInputValidation).empty());
  CHECK(l.of(VulnClass::LockedEther).empty());
}

TEST_CASE("clean contracts report nothing") {
  CHECK(load("clean").findings.empty());
  CHECK(load("fig4_references").findings.empty());
}

TEST_CASE("zero-address checks cover only unvalidated address parameters") {
  auto l = load("fig5_transferfrom");
  CHECK(ids(l) == std::vector<std::string>{
                      "MissingInputValidation:Coin:transferFrom(address,address,uint256)#0",
                      "MissingInputValidation:Coin:transferFrom(address,address,uint256)#1"});
  for (const auto& f : l.findings) CHECK(f.fixable);
}

TEST_CASE("validation through a modifier argument counts") {
  auto l = load("mixed");
  for (const auto& f : l.of(VulnClass::MissingInputValidation)) CHECK(f->site.description == "collector");
}

TEST_CASE("unfixable reasons") {
  struct Case {
    const char* fixture;
    VulnClass cls;
    UnfixableReason reason;
  } cases[] = {
      {"timestamp_reentrancy", VulnClass::Reentrancy, UnfixableReason::TimestampDependentWrite},
      {"non_address_param", VulnClass::MissingInputValidation, UnfixableReason::NonAddressParameter},
      {"library_locked", VulnClass::LockedEther, UnfixableReason::LibraryContract},
      {"handled_send", VulnClass::UnhandledException, UnfixableReason::ReturnValueHandled},
      {"extcall_controls_write", VulnClass::Reentrancy, UnfixableReason::ExternalCallControlsWrite},
  };
  for (const auto& c : cases) {
    CAPTURE(c.fixture);
    auto l = load(c.fixture);
    REQUIRE(l.findings.size() == 1);
    CHECK(l.findings[0].cls == c.cls);
    CHECK_FALSE(l.findings[0].fixable);
    REQUIRE(l.findings[0].reason);
    CHECK(*l.findings[0].reason == c.reason);
  }
}

TEST_CASE("locked ether needs a payable entry and no way out") {
  auto l = load("locked_ether");
  REQUIRE(l.findings.size() == 1);
  CHECK(l.findings[0].cls == VulnClass::LockedEther);
  CHECK(l.findings[0].scope == detect::Scope::Contract);

  auto open = load_source(
      "contract A { function () public payable {} function out() public { msg.sender.transfer(1); } }");
  CHECK(open.findings.empty());
  auto unpayable = load_source("contract A { uint x; function f() public { x = 1; } }");
  CHECK(unpayable.findings.empty());
}

TEST_CASE("selfdestruct or delegatecall reaches only some strategies") {
  auto l = load("delegate_exit");
  REQUIRE(l.findings.size() == 1);
  CHECK(l.findings[0].votes == std::set<Strategy>{Strategy::Dataflow, Strategy::Semantic});

  auto destruct = load_source(
      "contract A { address o; function () public payable {} function kill() public { selfdestruct(o); } }");
  CHECK(destruct.findings.empty());
}

TEST_CASE("thresholds gate the ensemble") {
  std::string src = corpus_source("delegate_exit");
  detect::DetectConfig strict;
  strict.thresholds[static_cast<int>(VulnClass::LockedEther)] = 3;
  CHECK(load_source(src, strict).findings.empty());
  detect::DetectConfig no_semantic;
  no_semantic.disabled.insert(Strategy::Semantic);
  CHECK(load_source(src, no_semantic).findings.empty());
}

TEST_CASE("ordinals count sites within a function") {
  auto l = load("two_sends");
  CHECK(ids(l) == std::vector<std::string>{"UnhandledException:Splitter:split()#0",
                                           "UnhandledException:Splitter:split()#1"});
}

TEST_CASE("a mutex guard silences the dataflow vote") {
  auto l = load_source(
      "contract A { bool locked; uint x;"
      " function f() public { require(!locked); locked = true;"
      " require(msg.sender.call.value(1)()); x = 1; locked = false; } }");
  CHECK(l.of(VulnClass::Reentrancy).empty());
  CHECK(detect::is_mutex_guarded(*l.function("A", "f"), l.analysis->program));
}

TEST_CASE("writes before the call are not reentrancy") {
  auto l = load_source(
      "contract A { mapping(address => uint) b;"
      " function f() public { uint v = b[msg.sender]; b[msg.sender] = 0;"
      " require(msg.sender.call.value(v)()); } }");
  CHECK(l.of(VulnClass::Reentrancy).empty());
}

TEST_CASE("view functions and constructors are skipped for reentrancy") {
  auto l = load_source(
      "contract T { function g() public returns (uint); }"
      " contract A { T t; uint x;"
      " constructor(T _t) public { t = _t; t.g(); x = 1; } }");
  CHECK(l.of(VulnClass::Reentrancy).empty());
}

TEST_CASE("findings are sorted by position then class") {
  auto l = load("mixed");
  for (std::size_t i = 1; i < l.findings.size(); ++i)
    CHECK(l.findings[i - 1].site.span.begin <= l.findings[i].site.span.begin);
}
