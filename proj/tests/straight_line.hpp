#pragma once

// Random straight-line functions over at most four scalar variables, with
// the read and write set of every statement known by construction.

#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace solfix::testing {

struct GenStmt {
  std::string text;
  std::set<std::string> reads;
  std::set<std::string> writes;
};

struct GenFunction {
  std::vector<std::string> state_vars;
  std::vector<GenStmt> body;

  std::string source() const {
    std::string out = "pragma solidity ^0.4.24;\ncontract G {\n";
    for (const auto& v : state_vars) out += "    uint " + v + ";\n";
    out += "    function f() public {\n";
    for (const auto& s : body) out += "        " + s.text + "\n";
    return out + "    }\n}\n";
  }
};

inline GenFunction random_function(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  GenFunction g;
  int nvars = 1 + pick(4);
  std::vector<std::string> names;
  std::set<std::string> locals;
  for (int i = 0; i < nvars; ++i) {
    std::string name = "v" + std::to_string(i);
    names.push_back(name);
    if (pick(3) == 0)
      locals.insert(name);
    else
      g.state_vars.push_back(name);
  }
  std::set<std::string> declared(g.state_vars.begin(), g.state_vars.end());
  auto readable = [&] { return std::vector<std::string>(declared.begin(), declared.end()); };
  auto operand = [&](GenStmt& s) {
    auto vars = readable();
    if (vars.empty() || pick(4) == 0) return std::to_string(pick(9));
    std::string v = vars[pick(static_cast<int>(vars.size()))];
    s.reads.insert(v);
    return v;
  };
  auto expr = [&](GenStmt& s) {
    switch (pick(3)) {
      case 0: return operand(s);
      case 1: {
        std::string a = operand(s);
        return a + " + " + operand(s);
      }
      default: return operand(s) + " * 2";
    }
  };
  int n = 1 + pick(10);
  while (static_cast<int>(g.body.size()) < n) {
    GenStmt s;
    std::string x = names[pick(nvars)];
    bool is_declared = declared.count(x) > 0;
    int form = pick(5);
    if (!is_declared) {
      s.text = "uint " + x + " = " + expr(s) + ";";
      s.writes.insert(x);
      declared.insert(x);
    } else if (form == 0) {
      s.text = x + " = " + expr(s) + ";";
      s.writes.insert(x);
    } else if (form == 1) {
      s.text = x + " += " + expr(s) + ";";
      s.reads.insert(x);
      s.writes.insert(x);
    } else if (form == 2) {
      s.text = x + "++;";
      s.reads.insert(x);
      s.writes.insert(x);
    } else if (form == 3) {
      std::string a = operand(s);
      s.text = "require(" + a + " > " + operand(s) + ");";
    } else {
      s.text = "delete " + x + ";";
      s.writes.insert(x);
    }
    g.body.push_back(std::move(s));
  }
  return g;
}

/// (from, to, kind, variable) for every ordered statement pair, kinds as
/// RAW/WAR/WAW/RAR.
using DepTuple = std::tuple<int, int, std::string, std::string>;

inline std::set<DepTuple> brute_force_dependences(const GenFunction& g) {
  std::set<DepTuple> out;
  auto both = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    std::vector<std::string> r;
    for (const auto& x : a)
      if (b.count(x)) r.push_back(x);
    return r;
  };
  for (int i = 0; i < static_cast<int>(g.body.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(g.body.size()); ++j) {
      const auto& s1 = g.body[i];
      const auto& s2 = g.body[j];
      for (const auto& v : both(s1.writes, s2.reads)) out.insert({i, j, "RAW", v});
      for (const auto& v : both(s1.reads, s2.writes)) out.insert({i, j, "WAR", v});
      for (const auto& v : both(s1.writes, s2.writes)) out.insert({i, j, "WAW", v});
      for (const auto& v : both(s1.reads, s2.reads)) out.insert({i, j, "RAR", v});
    }
  }
  return out;
}

/// Def-use edges: each read is fed by the nearest earlier writer.
inline std::set<std::tuple<int, int, std::string>> brute_force_def_use(const GenFunction& g) {
  std::set<std::tuple<int, int, std::string>> out;
  for (int j = 0; j < static_cast<int>(g.body.size()); ++j) {
    for (const auto& v : g.body[j].reads) {
      for (int i = j - 1; i >= 0; --i) {
        if (g.body[i].writes.count(v)) {
          out.insert({i, j, v});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace solfix::testing
