#pragma once

/// Detect, patch and verify over files, plus the JSON and text reports.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "solfix/detectors.hpp"
#include "solfix/patcher.hpp"
#include "solfix/verifier.hpp"

namespace solfix::pipeline {

enum class Mode { Detect, Fix, Verify };
enum class Format { Json, Text };

std::optional<Mode> parse_mode(const std::string& s);

struct RunConfig {
  std::vector<std::string> inputs;
  Mode mode = Mode::Fix;
  bool force_lock = false;
  std::array<int, 4> thresholds = {2, 2, 1, 2};
  /// Empty means next to each input.
  std::string out_dir;
  Format format = Format::Json;
  bool dump_graphs = false;
  int jobs = 1;
  /// Patched file for verify mode.
  std::string patched;
  /// Write .fixed.sol, .diff and graph dumps.
  bool write_files = true;
};

struct FindingRecord {
  std::string id;
  std::string cls;
  std::string contract;
  std::string function;
  int ordinal = 0;
  std::uint32_t line = 0;
  std::string site;
  std::vector<std::string> votes;
  bool fixable = true;
  std::string reason;
};

FindingRecord record(const detect::Finding& f);

struct Timing {
  double detect_ms = 0;
  double patch_ms = 0;
  double verify_ms = 0;
};

struct ContractResult {
  std::string name;
  std::vector<FindingRecord> findings;
  std::vector<patch::PatchOutcome> patches;
  bool verified = false;
  bool pass = false;
  std::vector<verify::FindingStatus> statuses;
  int changed_lines = 0;
};

struct FileResult {
  std::string path;
  /// "syntax", "unsupported" or "io"; empty when the file was processed.
  std::string error_kind;
  std::string error;
  std::vector<ContractResult> contracts;
  std::string fixed_path;
  std::string diff_path;
  std::string original_text;
  std::string patched_text;
  std::string diff_text;
  Timing timing;

  /// 0 clean or fully fixed, 1 residual findings, 2 input errors.
  int exit_code(Mode mode) const;
};

struct RunResult {
  Mode mode = Mode::Fix;
  std::vector<FileResult> files;

  int exit_code() const;
};

/// Expands directories to their `.sol` files (skipping `.fixed.sol`),
/// sorted. Missing paths become io errors in `run`.
std::vector<std::string> collect_inputs(const std::vector<std::string>& paths);

FileResult process_source(const std::string& path, const std::string& source,
                          const RunConfig& config);
FileResult process_file(const std::string& path, const RunConfig& config);

/// Processes every input, `jobs` files at a time; result order follows the
/// sorted input list.
RunResult run(const RunConfig& config);

/// `{"contracts": [...]}` in input order. Timing is confined to each
/// entry's "timing" field and omitted when `timing` is false.
std::string report_json(const RunResult& result, bool timing = true);
std::string report_text(const RunResult& result);

}  // namespace solfix::pipeline
