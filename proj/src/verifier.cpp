#include "solfix/verifier.hpp"

#include <map>

#include "solfix/parser.hpp"

namespace solfix::verify {

const char* to_string(Status s) {
  switch (s) {
    case Status::Eliminated: return "eliminated";
    case Status::Residual: return "residual";
    case Status::Introduced: return "introduced";
  }
  return "";
}

detect::Finding detach(const detect::Finding& f) {
  detect::Finding out = f;
  out.site.fn = nullptr;
  out.site.stmt = nullptr;
  out.site.call = nullptr;
  out.site.param = nullptr;
  return out;
}

bool VerificationReport::pass_for(const std::string& contract) const {
  if (!failure.empty()) return false;
  for (const auto& s : statuses) {
    if (s.contract != contract) continue;
    if (s.status == Status::Introduced) return false;
    if (s.status == Status::Residual && s.fixable) return false;
  }
  return true;
}

namespace {

VerificationReport compare(const std::vector<detect::Finding>& original,
                           const std::vector<detect::Finding>& now) {
  VerificationReport r;
  std::map<std::string, const detect::Finding*> current;
  for (const auto& f : now) current.emplace(f.id(), &f);
  std::set<std::string> before;
  r.pass = true;
  for (const auto& f : original) {
    r.original.push_back(detach(f));
    before.insert(f.id());
    FindingStatus s{f.id(), f.cls, f.site.contract, f.fixable, Status::Eliminated};
    if (current.count(f.id())) {
      s.status = Status::Residual;
      r.residual.push_back(detach(*current[f.id()]));
      if (f.fixable) r.pass = false;
    } else {
      r.eliminated.insert(f.id());
    }
    r.statuses.push_back(s);
  }
  for (const auto& f : now) {
    if (before.count(f.id())) continue;
    r.introduced.insert(f.id());
    r.residual.push_back(detach(f));
    r.statuses.push_back({f.id(), f.cls, f.site.contract, f.fixable, Status::Introduced});
    r.pass = false;
  }
  return r;
}

}  // namespace

VerificationReport verify(const ast::SourceUnit& patched,
                          const std::vector<detect::Finding>& original,
                          const detect::DetectConfig& config) {
  analysis::UnitAnalysis a(patched);
  return compare(original, detect::detect(a, config));
}

VerificationReport verify_text(const std::string& patched_text,
                               const std::vector<detect::Finding>& original,
                               const detect::DetectConfig& config) {
  ast::SourceUnit unit;
  try {
    unit = parse(patched_text, "<patched>");
  } catch (const std::exception& e) {
    VerificationReport r;
    for (const auto& f : original) {
      r.original.push_back(detach(f));
      r.residual.push_back(detach(f));
      r.statuses.push_back({f.id(), f.cls, f.site.contract, f.fixable, Status::Residual});
    }
    r.failure = e.what();
    r.pass = false;
    return r;
  }
  return verify(unit, original, config);
}

}  // namespace solfix::verify
