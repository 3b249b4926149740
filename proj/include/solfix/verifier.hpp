#pragma once

/// Re-detection on the patched unit and the pass/fail verdict.

#include <set>
#include <string>
#include <vector>

#include "solfix/detectors.hpp"

namespace solfix::verify {

enum class Status { Eliminated, Residual, Introduced };

const char* to_string(Status s);

struct FindingStatus {
  std::string id;
  detect::VulnClass cls = detect::VulnClass::Reentrancy;
  std::string contract;
  bool fixable = true;
  Status status = Status::Residual;
};

/// Findings here never point into an AST; the site pointers are cleared.
struct VerificationReport {
  std::vector<detect::Finding> original;
  std::vector<detect::Finding> residual;
  std::set<std::string> eliminated;
  std::set<std::string> introduced;
  bool pass = false;
  /// Set when the patched text did not parse.
  std::string failure;
  std::vector<FindingStatus> statuses;

  /// Verdict over the findings of one contract.
  bool pass_for(const std::string& contract) const;
};

/// Findings are matched by id (class, contract, function signature, ordinal).
/// Pass iff every fixable original is eliminated and nothing new appears.
VerificationReport verify(const ast::SourceUnit& patched,
                          const std::vector<detect::Finding>& original,
                          const detect::DetectConfig& config = {});

/// Parses `patched_text` first; a syntax or dialect error fails the verdict.
VerificationReport verify_text(const std::string& patched_text,
                               const std::vector<detect::Finding>& original,
                               const detect::DetectConfig& config = {});

/// Copy with the AST pointers cleared.
detect::Finding detach(const detect::Finding& f);

}  // namespace solfix::verify
