#pragma once

/// Line-based unified diff.

#include <string>
#include <vector>

namespace solfix::diff {

struct Hunk {
  int old_start = 0;
  int old_count = 0;
  int new_start = 0;
  int new_count = 0;
  /// Each line prefixed with ' ', '-' or '+'.
  std::vector<std::string> lines;
};

struct Diff {
  std::vector<Hunk> hunks;
  int added = 0;
  int removed = 0;

  int changed() const { return added + removed; }
  bool empty() const { return hunks.empty(); }
  /// `---`/`+++` header followed by the hunks; empty when nothing changed.
  std::string text(const std::string& from, const std::string& to) const;
};

std::vector<std::string> split_lines(const std::string& text);

/// LCS alignment of the two texts with `context` lines around each change.
Diff unified_diff(const std::string& before, const std::string& after, int context = 3);

}  // namespace solfix::diff
