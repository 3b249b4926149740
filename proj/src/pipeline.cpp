#include "solfix/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "solfix/diff.hpp"
#include "solfix/parser.hpp"
#include "solfix/printer.hpp"

namespace solfix::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "detect") return Mode::Detect;
  if (s == "fix") return Mode::Fix;
  if (s == "verify") return Mode::Verify;
  return std::nullopt;
}

FindingRecord record(const detect::Finding& f) {
  FindingRecord r;
  r.id = f.id();
  r.cls = detect::to_string(f.cls);
  r.contract = f.site.contract;
  r.function = f.site.function;
  r.ordinal = f.site.ordinal;
  r.line = f.site.line;
  r.site = f.site.description;
  for (auto v : f.votes) r.votes.push_back(detect::to_string(v));
  r.fixable = f.fixable;
  if (f.reason) r.reason = detect::to_string(*f.reason);
  return r;
}

int FileResult::exit_code(Mode mode) const {
  if (!error_kind.empty()) return 2;
  for (const auto& c : contracts) {
    if (mode == Mode::Detect) {
      if (!c.findings.empty()) return 1;
      continue;
    }
    if (!c.pass) return 1;
    for (const auto& s : c.statuses)
      if (s.status != verify::Status::Eliminated) return 1;
  }
  return 0;
}

int RunResult::exit_code() const {
  int code = 0;
  for (const auto& f : files) code = std::max(code, f.exit_code(mode));
  return code;
}

std::vector<std::string> collect_inputs(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& e : fs::recursive_directory_iterator(p, ec)) {
        std::string name = e.path().filename().string();
        if (!e.is_regular_file() || e.path().extension() != ".sol") continue;
        if (name.size() >= 10 && name.ends_with(".fixed.sol")) continue;
        out.push_back(e.path().string());
      }
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string output_base(const std::string& input, const RunConfig& config) {
  fs::path p(input);
  fs::path dir = config.out_dir.empty() ? p.parent_path() : fs::path(config.out_dir);
  return (dir / p.stem()).string();
}

std::string graphs(const analysis::UnitAnalysis& a) {
  std::string out = "points-to\n" + a.pts.dump();
  for (const auto& c : a.unit.contracts) {
    for (const auto* fn : c->functions()) {
      const auto* fa = a.function(fn);
      if (!fa) continue;
      out += "\n== " + c->name + "." + fn->signature() + "\ncfg\n" + fa->cfg.dump() + "dfg\n" +
             fa->dfg.dump();
    }
  }
  return out;
}

const ast::ContractDef* find(const ast::SourceUnit& u, const std::string& name) {
  return u.find_contract(name);
}

std::string contract_of(const std::string& finding_id) {
  auto a = finding_id.find(':');
  auto b = finding_id.find(':', a + 1);
  return finding_id.substr(a + 1, b - a - 1);
}

}  // namespace

FileResult process_source(const std::string& path, const std::string& source,
                          const RunConfig& config) {
  FileResult r;
  r.path = path;
  r.original_text = source;
  detect::DetectConfig dc;
  dc.thresholds = config.thresholds;

  auto t0 = Clock::now();
  ast::SourceUnit unit;
  try {
    unit = parse(source, path);
  } catch (const SyntaxError& e) {
    r.error_kind = "syntax";
    r.error = e.what();
    return r;
  } catch (const UnsupportedConstruct& e) {
    r.error_kind = "unsupported";
    r.error = e.what();
    return r;
  }
  std::vector<detect::Finding> findings;
  {
    analysis::UnitAnalysis a(unit);
    findings = detect::detect(a, dc);
    if (config.dump_graphs && config.write_files)
      write_file(output_base(path, config) + ".graphs.txt", graphs(a));
  }
  r.timing.detect_ms = ms_since(t0);

  for (const auto& c : unit.contracts) {
    ContractResult cr;
    cr.name = c->name;
    for (const auto& f : findings)
      if (f.site.contract == c->name) cr.findings.push_back(record(f));
    r.contracts.push_back(std::move(cr));
  }
  auto contract = [&](const std::string& name) -> ContractResult* {
    for (auto& c : r.contracts)
      if (c.name == name) return &c;
    return nullptr;
  };

  if (config.mode == Mode::Detect) return r;

  std::optional<ast::SourceUnit> patched;
  if (config.mode == Mode::Fix) {
    auto t1 = Clock::now();
    patch::PatchConfig pc;
    pc.force_lock = config.force_lock;
    pc.detect = dc;
    patch::PatchResult pr = patch::generate_patches(unit, findings, pc);
    for (const auto& o : pr.outcomes)
      if (auto* c = contract(contract_of(o.finding))) c->patches.push_back(o);
    r.patched_text = print(pr.patched);
    patched = std::move(pr.patched);
    r.timing.patch_ms = ms_since(t1);
  } else {
    if (!read_file(config.patched, r.patched_text)) {
      r.error_kind = "io";
      r.error = "cannot read " + config.patched;
      return r;
    }
  }

  auto t2 = Clock::now();
  verify::VerificationReport vr = verify::verify_text(r.patched_text, findings, dc);
  r.timing.verify_ms = ms_since(t2);
  for (const auto& s : vr.statuses)
    if (auto* c = contract(s.contract)) c->statuses.push_back(s);
  for (auto& c : r.contracts) {
    c.verified = true;
    c.pass = vr.pass_for(c.name);
  }

  std::string canonical = print(unit);
  diff::Diff d = diff::unified_diff(canonical, r.patched_text);
  if (patched) {
    for (auto& c : r.contracts) {
      const auto* before = find(unit, c.name);
      const auto* after = find(*patched, c.name);
      if (before && after)
        c.changed_lines = diff::unified_diff(print_contract(*before), print_contract(*after)).changed();
    }
  }
  std::string base = output_base(path, config);
  if (config.mode == Mode::Fix) {
    r.fixed_path = base + ".fixed.sol";
    r.diff_path = base + ".diff";
    r.diff_text = d.text(fs::path(path).filename().string(),
                         fs::path(r.fixed_path).filename().string());
    if (config.write_files) {
      write_file(r.fixed_path, r.patched_text);
      write_file(r.diff_path, r.diff_text);
    }
  } else {
    r.diff_text = d.text(fs::path(path).filename().string(), config.patched);
  }
  return r;
}

FileResult process_file(const std::string& path, const RunConfig& config) {
  std::string source;
  if (!read_file(path, source)) {
    FileResult r;
    r.path = path;
    r.error_kind = "io";
    r.error = "cannot read " + path;
    return r;
  }
  return process_source(path, source, config);
}

RunResult run(const RunConfig& config) {
  RunResult result;
  result.mode = config.mode;
  auto inputs = collect_inputs(config.inputs);
  if (config.write_files && !config.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
  }
  result.files.resize(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      try {
        result.files[i] = process_file(inputs[i], config);
      } catch (const std::exception& e) {
        result.files[i] = FileResult{};
        result.files[i].path = inputs[i];
        result.files[i].error_kind = "internal";
        result.files[i].error = e.what();
      }
    }
  };
  int jobs = std::clamp(config.jobs, 1, std::max<int>(1, static_cast<int>(inputs.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json finding_json(const FindingRecord& f) {
  json j;
  j["id"] = f.id;
  j["class"] = f.cls;
  j["function"] = f.function;
  j["ordinal"] = f.ordinal;
  j["line"] = f.line;
  j["site"] = f.site;
  j["votes"] = f.votes;
  j["fixable"] = f.fixable;
  j["reason"] = f.reason.empty() ? json() : json(f.reason);
  return j;
}

json patch_json(const patch::PatchOutcome& o) {
  json j;
  j["finding"] = o.finding;
  j["pattern"] = o.pattern.empty() ? json() : json(o.pattern);
  j["edits"] = o.edits;
  j["gas"] = o.gas;
  j["status"] = o.status;
  j["note"] = o.note;
  return j;
}

json rounded(double ms) { return std::round(ms * 1000.0) / 1000.0; }

}  // namespace

std::string report_json(const RunResult& result, bool timing) {
  json contracts = json::array();
  for (const auto& f : result.files) {
    if (!f.error_kind.empty()) {
      json j;
      j["file"] = f.path;
      j["contract"] = nullptr;
      j["error"] = {{"kind", f.error_kind}, {"message", f.error}};
      contracts.push_back(j);
      continue;
    }
    for (const auto& c : f.contracts) {
      json j;
      j["file"] = f.path;
      j["contract"] = c.name;
      json fs_ = json::array();
      for (const auto& x : c.findings) fs_.push_back(finding_json(x));
      j["findings"] = fs_;
      if (result.mode == Mode::Fix) {
        json ps = json::array();
        for (const auto& p : c.patches) ps.push_back(patch_json(p));
        j["patches"] = ps;
      }
      if (c.verified) {
        json v;
        v["verdict"] = c.pass ? "pass" : "fail";
        for (auto st : {verify::Status::Eliminated, verify::Status::Residual,
                        verify::Status::Introduced}) {
          json ids = json::array();
          for (const auto& s : c.statuses)
            if (s.status == st) ids.push_back(s.id);
          v[verify::to_string(st)] = ids;
        }
        j["verification"] = v;
      }
      if (result.mode == Mode::Fix) {
        j["outputs"] = {{"fixed", f.fixed_path}, {"diff", f.diff_path},
                        {"changed_lines", c.changed_lines}};
      }
      if (timing)
        j["timing"] = {{"detect_ms", rounded(f.timing.detect_ms)},
                       {"patch_ms", rounded(f.timing.patch_ms)},
                       {"verify_ms", rounded(f.timing.verify_ms)}};
      contracts.push_back(j);
    }
  }
  json root;
  root["contracts"] = contracts;
  return root.dump(2) + "\n";
}

std::string report_text(const RunResult& result) {
  std::ostringstream out;
  std::map<std::string, int> per_class;
  int total = 0, fixed = 0, failed = 0;
  for (const auto& f : result.files) {
    if (!f.error_kind.empty()) {
      out << f.path << ": " << f.error_kind << " error: " << f.error << "\n";
      continue;
    }
    for (const auto& c : f.contracts) {
      int c_fixed = 0, c_failed = 0;
      for (const auto& s : c.statuses) {
        if (s.status == verify::Status::Eliminated) ++c_fixed;
        else if (s.fixable || s.status == verify::Status::Introduced) ++c_failed;
      }
      for (const auto& p : c.patches)
        if (p.status == "failed") ++c_failed;
      out << f.path << " " << c.name << ": findings " << c.findings.size();
      if (result.mode != Mode::Detect) {
        out << ", fixed " << c_fixed << ", failed " << c_failed << ", verdict "
            << (c.pass ? "pass" : "fail");
      }
      char buf[96];
      std::snprintf(buf, sizeof buf, " (detect %.1f ms, patch %.1f ms, verify %.1f ms)\n",
                    f.timing.detect_ms, f.timing.patch_ms, f.timing.verify_ms);
      out << buf;
      for (const auto& x : c.findings) {
        out << "  " << x.id << " line " << x.line << " [";
        for (std::size_t i = 0; i < x.votes.size(); ++i) out << (i ? "," : "") << x.votes[i];
        out << "]" << (x.fixable ? "" : " unfixable: " + x.reason) << "\n";
        ++per_class[x.cls];
        ++total;
      }
      fixed += c_fixed;
      failed += c_failed;
    }
  }
  out << "\nsummary\n";
  for (auto cls : detect::kAllClasses)
    out << "  " << detect::to_string(cls) << ": " << per_class[detect::to_string(cls)] << "\n";
  out << "  total: " << total << "\n";
  if (result.mode != Mode::Detect) out << "  fixed: " << fixed << ", failed: " << failed << "\n";
  return out.str();
}

}  // namespace solfix::pipeline
