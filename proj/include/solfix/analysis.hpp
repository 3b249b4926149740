#pragma once

#include <map>
#include <string>
#include <vector>

#include "solfix/dataflow.hpp"

namespace solfix::analysis {

/// Everything computed for one parsed unit. Holds references into `unit`,
/// which must outlive it. Not copyable or movable.
class UnitAnalysis {
public:
  explicit UnitAnalysis(const ast::SourceUnit& unit);
  UnitAnalysis(const UnitAnalysis&) = delete;
  UnitAnalysis& operator=(const UnitAnalysis&) = delete;

  const ast::SourceUnit& unit;
  sema::Program program;
  PointsToMap pts;
  Summaries summaries;

  /// Null for declarations and functions whose modifiers do not resolve.
  const FunctionAnalysis* function(const ast::FunctionDef* fn) const;
  /// Unresolved modifiers and similar per-function problems.
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::map<const ast::FunctionDef*, FunctionAnalysis> functions_;
  std::vector<std::string> errors_;
};

}  // namespace solfix::analysis
