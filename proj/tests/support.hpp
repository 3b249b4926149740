#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "solfix/analysis.hpp"
#include "solfix/detectors.hpp"
#include "solfix/parser.hpp"

namespace solfix::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(SOLFIX_CORPUS_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_source(const std::string& name) {
  return read_text(corpus_path(name + ".sol"));
}

inline std::vector<std::string> corpus_names() {
  return {"blocked_reorder",   "clean",           "delegate_exit",     "extcall_controls_write",
          "fig2_victim",       "fig4_references", "fig5_transferfrom", "handled_send",
          "library_locked",    "locked_ether",    "locked_with_owner", "mixed",
          "modern_call",       "modifier_lock",   "non_address_param", "timestamp_reentrancy",
          "two_sends",         "unhandled_send",  "vesting",           "all_classes"};
}

/// A parsed unit with its analyses; the unit stays put on the heap.
struct Loaded {
  std::unique_ptr<ast::SourceUnit> unit;
  std::unique_ptr<analysis::UnitAnalysis> analysis;
  std::vector<detect::Finding> findings;

  const ast::FunctionDef* function(const std::string& contract, const std::string& name) const {
    const auto* c = unit->find_contract(contract);
    return c ? c->find_function(name) : nullptr;
  }
  const analysis::FunctionAnalysis* fa(const std::string& contract, const std::string& name) const {
    return analysis->function(function(contract, name));
  }
  std::vector<const detect::Finding*> of(detect::VulnClass cls) const {
    std::vector<const detect::Finding*> out;
    for (const auto& f : findings)
      if (f.cls == cls) out.push_back(&f);
    return out;
  }
};

inline Loaded load_source(const std::string& source, const detect::DetectConfig& config = {}) {
  Loaded l;
  l.unit = std::make_unique<ast::SourceUnit>(parse(source, "<test>"));
  l.analysis = std::make_unique<analysis::UnitAnalysis>(*l.unit);
  l.findings = detect::detect(*l.analysis, config);
  return l;
}

inline Loaded load_unit(ast::SourceUnit unit) {
  Loaded l;
  l.unit = std::make_unique<ast::SourceUnit>(std::move(unit));
  l.analysis = std::make_unique<analysis::UnitAnalysis>(*l.unit);
  l.findings = detect::detect(*l.analysis);
  return l;
}

inline Loaded load(const std::string& name) { return load_source(corpus_source(name)); }

}  // namespace solfix::testing
