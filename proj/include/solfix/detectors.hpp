#pragma once

/// Three detection strategies per vulnerability class, majority voting and
/// the fixability filters.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "solfix/analysis.hpp"

namespace solfix::detect {

enum class VulnClass { UnhandledException, Reentrancy, MissingInputValidation, LockedEther };
enum class Strategy { Syntactic, Dataflow, Semantic };
enum class Scope { Statement, Function, Contract };
enum class UnfixableReason {
  ExternalCallControlsWrite,
  TimestampDependentWrite,
  NonAddressParameter,
  LibraryContract,
  ReturnValueHandled,
};

inline constexpr std::array<VulnClass, 4> kAllClasses = {
    VulnClass::UnhandledException, VulnClass::Reentrancy, VulnClass::MissingInputValidation,
    VulnClass::LockedEther};

const char* to_string(VulnClass c);
const char* to_string(Strategy s);
const char* to_string(Scope s);
const char* to_string(UnfixableReason r);
std::optional<VulnClass> parse_class(const std::string& name);

/// Where a finding lives. Identity across versions of a file is
/// (class, contract, function signature, ordinal): the ordinal counts call
/// sites or parameters within the function, so it survives line shifts.
struct Site {
  std::string contract;
  /// Empty for contract-scope findings.
  std::string function;
  int ordinal = 0;
  ast::NodeId node{};
  ast::Span span;
  std::uint32_t line = 0;
  /// Printed call expression or parameter name.
  std::string description;

  const ast::FunctionDef* fn = nullptr;
  /// Function-body statement holding the call (Reentrancy, UnhandledException).
  const ast::Stmt* stmt = nullptr;
  const ast::FunctionCall* call = nullptr;
  const ast::VarDecl* param = nullptr;
};

struct Vote {
  Strategy detector = Strategy::Syntactic;
  VulnClass cls = VulnClass::Reentrancy;
  Site site;
  std::string note;
};

struct Finding {
  VulnClass cls = VulnClass::Reentrancy;
  Site site;
  Scope scope = Scope::Statement;
  std::set<Strategy> votes;
  bool fixable = true;
  std::optional<UnfixableReason> reason;

  /// `Class:Contract:function(sig)#ordinal`.
  std::string id() const;
};

struct DetectConfig {
  /// Indexed by VulnClass.
  std::array<int, 4> thresholds = {2, 2, 1, 2};
  std::set<Strategy> disabled;

  int threshold(VulnClass c) const { return thresholds[static_cast<int>(c)]; }
};

std::vector<Vote> detect_reentrancy(const analysis::UnitAnalysis& a);
std::vector<Vote> detect_missing_input_validation(const analysis::UnitAnalysis& a);
std::vector<Vote> detect_locked_ether(const analysis::UnitAnalysis& a);
std::vector<Vote> detect_unhandled_exception(const analysis::UnitAnalysis& a);

/// Groups votes by site and keeps sites meeting their class threshold.
/// Sorted by (span, class).
std::vector<Finding> ensemble(const std::vector<Vote>& votes, const DetectConfig& config);

/// Annotates fixability in place.
void post_process(std::vector<Finding>& findings, const analysis::UnitAnalysis& a);

/// All four detectors, ensemble and post-processing.
std::vector<Finding> detect(const analysis::UnitAnalysis& a, const DetectConfig& config = {});

/// Blocks strictly reachable from `site` that write a storage location.
std::vector<int> storage_writes_after(const analysis::Cfg& cfg, const analysis::Dfg& dfg, int site,
                                      const analysis::PointsToMap& pts);

/// Where the boolean result of a send or low-level call goes.
struct ResultFlow {
  enum Kind { Bare, Local, Assigned, Consumed } kind = Consumed;
  /// First declared variable of `bool ok = ...` or `(bool ok, ) = ...`.
  const ast::VarDecl* local = nullptr;
  /// Left-hand side of `x = call`.
  const ast::Expr* target = nullptr;
};

ResultFlow result_flow(const ast::Stmt& stmt, const ast::FunctionCall& call);

/// True when `fn` starts with `require(!x); x = true;` for a bool state var.
bool is_mutex_guarded(const ast::FunctionDef& fn, const sema::Program& program);

/// Parameter `index` is a direct operand of a comparison inside
/// require/assert, or of an if-condition guarding a revert, before any
/// other use. Casts are transparent; a mapping index is not a comparison.
/// Validation inside an applied modifier's prefix counts.
bool parameter_validated(const ast::FunctionDef& fn, std::size_t index,
                         const sema::Program& program);

}  // namespace solfix::detect
