#include "solfix/diff.hpp"

#include <algorithm>

namespace solfix::diff {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

namespace {

struct Op {
  char tag;  // ' ', '-', '+'
  int a;     // index into before (or -1)
  int b;     // index into after (or -1)
};

std::vector<Op> align(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  // Strip the common prefix and suffix before the quadratic table.
  std::size_t pre = 0;
  while (pre < x.size() && pre < y.size() && x[pre] == y[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < x.size() - pre && suf < y.size() - pre &&
         x[x.size() - 1 - suf] == y[y.size() - 1 - suf])
    ++suf;
  std::size_t n = x.size() - pre - suf;
  std::size_t m = y.size() - pre - suf;
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = x[pre + i] == y[pre + j] ? lcs[i + 1][j + 1] + 1
                                           : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Op> ops;
  for (std::size_t k = 0; k < pre; ++k) ops.push_back({' ', int(k), int(k)});
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && x[pre + i] == y[pre + j]) {
      ops.push_back({' ', int(pre + i), int(pre + j)});
      ++i;
      ++j;
    } else if (j < m && (i == n || lcs[i][j + 1] > lcs[i + 1][j])) {
      ops.push_back({'+', -1, int(pre + j)});
      ++j;
    } else {
      ops.push_back({'-', int(pre + i), -1});
      ++i;
    }
  }
  for (std::size_t k = 0; k < suf; ++k)
    ops.push_back({' ', int(x.size() - suf + k), int(y.size() - suf + k)});
  return ops;
}

}  // namespace

Diff unified_diff(const std::string& before, const std::string& after, int context) {
  auto x = split_lines(before);
  auto y = split_lines(after);
  auto ops = align(x, y);
  Diff d;
  std::size_t k = 0;
  while (k < ops.size()) {
    while (k < ops.size() && ops[k].tag == ' ') ++k;
    if (k == ops.size()) break;
    std::size_t begin = k >= std::size_t(context) ? k - context : 0;
    // Extend while the next change is within 2*context unchanged lines.
    std::size_t end = k;
    for (;;) {
      while (end < ops.size() && ops[end].tag != ' ') ++end;
      std::size_t run = end;
      while (run < ops.size() && ops[run].tag == ' ') ++run;
      if (run < ops.size() && run - end <= std::size_t(2 * context)) {
        end = run;
        continue;
      }
      end = std::min(ops.size(), end + context);
      break;
    }
    Hunk h;
    int old_first = -1, new_first = -1;
    // Position of the hunk start in each file, counting lines before it.
    int old_before = 0, new_before = 0;
    for (std::size_t t = 0; t < begin; ++t) {
      if (ops[t].tag != '+') ++old_before;
      if (ops[t].tag != '-') ++new_before;
    }
    for (std::size_t t = begin; t < end; ++t) {
      const Op& op = ops[t];
      if (op.tag != '+') {
        ++h.old_count;
        if (old_first < 0) old_first = op.a;
      }
      if (op.tag != '-') {
        ++h.new_count;
        if (new_first < 0) new_first = op.b;
      }
      if (op.tag == '+') ++d.added;
      if (op.tag == '-') ++d.removed;
      h.lines.push_back(std::string(1, op.tag) + (op.tag == '+' ? y[op.b] : x[op.a]));
    }
    h.old_start = h.old_count ? old_first + 1 : old_before;
    h.new_start = h.new_count ? new_first + 1 : new_before;
    d.hunks.push_back(std::move(h));
    k = end;
  }
  return d;
}

std::string Diff::text(const std::string& from, const std::string& to) const {
  if (hunks.empty()) return "";
  std::string out = "--- " + from + "\n+++ " + to + "\n";
  for (const auto& h : hunks) {
    out += "@@ -" + std::to_string(h.old_start) + "," + std::to_string(h.old_count) + " +" +
           std::to_string(h.new_start) + "," + std::to_string(h.new_count) + " @@\n";
    for (const auto& l : h.lines) out += l + "\n";
  }
  return out;
}

}  // namespace solfix::diff
