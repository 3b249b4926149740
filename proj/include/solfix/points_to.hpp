#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "solfix/ast.hpp"
#include "solfix/semantics.hpp"

namespace solfix::analysis {

using LocId = int;

/// A declaration site paired with the data location its value lives in.
/// The pseudo location for `block.timestamp`/`now` has no declaration.
struct AbstractLocation {
  const ast::VarDecl* decl = nullptr;
  ast::DataLocation location = ast::DataLocation::Default;
  std::string name;

  bool is_storage() const { return location == ast::DataLocation::Storage; }
};

/// An assignment that made `target` refer to the object of `source`.
struct ReferenceEdge {
  const ast::VarDecl* target = nullptr;
  const ast::VarDecl* source = nullptr;
  ast::NodeId site{};
};

class PointsToMap {
public:
  const AbstractLocation& location(LocId id) const { return locations_[id]; }
  std::size_t size() const { return locations_.size(); }

  /// The variable's own location; -1 for pure references (local storage
  /// pointers), which own no object.
  LocId self(const ast::VarDecl* decl) const;
  /// Locations a variable may denote. For value-typed variables this is
  /// always {self}.
  const std::set<LocId>& points_to(const ast::VarDecl* decl) const;
  LocId timestamp() const { return timestamp_; }

  /// Variable denotes something other than exactly its own object.
  bool is_reference(const ast::VarDecl* decl) const;
  const std::vector<ReferenceEdge>& reference_edges() const { return edges_; }

  /// `name -> {loc, loc}` per variable, sorted, one per line.
  std::string dump() const;

private:
  friend PointsToMap pointer_analysis(const sema::Program& program);

  std::vector<AbstractLocation> locations_;
  std::unordered_map<const ast::VarDecl*, LocId> self_;
  std::unordered_map<const ast::VarDecl*, std::set<LocId>> pts_;
  std::vector<ReferenceEdge> edges_;
  LocId timestamp_ = -1;
};

/// Flow- and context-insensitive subset-based analysis. Only two
/// assignments create references: storage composite into a local storage
/// variable, and memory composite into a memory variable (including
/// argument-to-parameter binding of internal calls). Everything else copies.
PointsToMap pointer_analysis(const sema::Program& program);

}  // namespace solfix::analysis
