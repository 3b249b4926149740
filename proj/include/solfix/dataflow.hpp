#pragma once

/// Access events, method summaries, def-use graphs and the four-way
/// data-dependence classification.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "solfix/cfg.hpp"
#include "solfix/points_to.hpp"
#include "solfix/semantics.hpp"

namespace solfix::analysis {

enum class AccessMode { Create, Read, Write, Delete };

const char* to_string(AccessMode mode);

struct AccessEvent {
  int block = 0;
  LocId target = -1;
  AccessMode mode = AccessMode::Read;
  /// Whole-variable overwrite of a singleton location; kills older defs.
  bool strong = false;
};

struct CallSite {
  const ast::FunctionCall* call = nullptr;
  sema::CallInfo info;
};

struct BlockFacts {
  std::vector<AccessEvent> events;
  std::set<LocId> reads;
  /// Create, Write and Delete targets.
  std::set<LocId> writes;
  /// Every call in evaluation order, builtins included.
  std::vector<CallSite> calls;
  bool external_call = false;
  bool ether_transfer = false;
};

struct MethodSummary {
  const ast::FunctionDef* function = nullptr;
  std::set<LocId> state_written;
  std::set<LocId> state_read;
  bool external_call = false;
  /// send, transfer, call with value, or selfdestruct.
  bool ether_transfer = false;
  bool delegatecall = false;
  std::set<const ast::FunctionDef*> callees;
};

class Summaries {
public:
  const MethodSummary* of(const ast::FunctionDef* fn) const;
  const std::map<const ast::FunctionDef*, MethodSummary>& all() const { return map_; }

private:
  friend Summaries summarize(const sema::Program&, const PointsToMap&);
  std::map<const ast::FunctionDef*, MethodSummary> map_;
};

/// Per-function summaries for every function in the unit, closed over the
/// internal call graph. Applied modifiers count as part of the function.
Summaries summarize(const sema::Program& program, const PointsToMap& pts);

/// Accesses of the statement or expression evaluated by `block`.
BlockFacts block_facts(const Cfg& cfg, int block, const sema::Program& program,
                       const PointsToMap& pts, const Summaries* summaries);

struct DfgEdge {
  int from = 0;
  int to = 0;
  LocId location = -1;

  auto operator<=>(const DfgEdge&) const = default;
};

/// Def-use graph over CFG blocks from reaching definitions.
class Dfg {
public:
  std::vector<BlockFacts> facts;
  std::vector<DfgEdge> edges;

  bool has_use(int def_block, LocId loc) const;
  /// Blocks transitively data-dependent on `block` (excluding itself
  /// unless reached through a cycle).
  std::set<int> forward_closure(int block) const;
  std::string dump() const;
};

Dfg build_dfg(const Cfg& cfg, const sema::Program& program, const PointsToMap& pts,
              const Summaries& summaries);

enum class DepKind { RAW, WAR, WAW, RAR };

const char* to_string(DepKind kind);

struct Dependence {
  int from = 0;
  int to = 0;
  DepKind kind = DepKind::RAW;
  LocId location = -1;

  auto operator<=>(const Dependence&) const = default;
};

/// Every dependence between ordered block pairs (s1, s2) with s2 reachable
/// from s1, both inside `window` (all statement blocks when empty).
/// Sorted by (from, to, kind, location).
std::vector<Dependence> classify_dependences(const Cfg& cfg, const Dfg& dfg,
                                             const std::set<int>& window = {});

/// Everything the detectors and patcher need for one function.
struct FunctionAnalysis {
  Cfg cfg;
  Dfg dfg;
};

FunctionAnalysis analyze_function(const ast::FunctionDef& fn, const sema::ContractModel& contract,
                                  const sema::Program& program, const PointsToMap& pts,
                                  const Summaries& summaries);

}  // namespace solfix::analysis
