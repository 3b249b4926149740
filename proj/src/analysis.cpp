#include "solfix/analysis.hpp"

namespace solfix::analysis {

UnitAnalysis::UnitAnalysis(const ast::SourceUnit& u)
    : unit(u), program(u), pts(pointer_analysis(program)), summaries(summarize(program, pts)) {
  for (const auto& c : unit.contracts) {
    const sema::ContractModel* model = program.model(*c);
    for (const auto* f : c->functions()) {
      if (!f->body) continue;
      try {
        functions_.emplace(f, analyze_function(*f, *model, program, pts, summaries));
      } catch (const MissingModifier& e) {
        errors_.push_back(c->name + "." + f->display_name() + ": " + e.what());
      }
    }
  }
}

const FunctionAnalysis* UnitAnalysis::function(const ast::FunctionDef* fn) const {
  auto it = functions_.find(fn);
  return it == functions_.end() ? nullptr : &it->second;
}

}  // namespace solfix::analysis
