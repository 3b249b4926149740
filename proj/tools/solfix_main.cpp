// solfix: detect, patch and verify Solidity contracts.
//
//   solfix [options] <file-or-dir>...
//
// Exit status: 0 when every fixable finding was fixed and verified (or none
// was found), 1 when findings remain, 2 on unreadable or unparsable input.

#include <iostream>

#include <CLI11.hpp>

#include "solfix/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace solfix;
  CLI::App app{"Detect, patch and verify Solidity contract vulnerabilities"};
  app.name("solfix");

  pipeline::RunConfig config;
  std::string mode = "fix";
  std::string reentrancy = "reorder";
  std::string format = "json";
  app.add_option("inputs", config.inputs, "Solidity files or directories")->required();
  app.add_option("--mode", mode, "detect, fix or verify")
      ->check(CLI::IsMember({"detect", "fix", "verify"}))
      ->envname("SOLFIX_MODE")
      ->capture_default_str();
  app.add_option("--reentrancy", reentrancy, "Reentrancy fix: reorder (lock when blocked) or lock")
      ->check(CLI::IsMember({"reorder", "lock"}))
      ->envname("SOLFIX_REENTRANCY")
      ->capture_default_str();
  app.add_option("--out", config.out_dir, "Directory for .fixed.sol, .diff and graph files")
      ->envname("SOLFIX_OUT");
  app.add_option("--format", format, "Report format: json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->envname("SOLFIX_FORMAT")
      ->capture_default_str();
  app.add_flag("--dump-graphs", config.dump_graphs, "Write CFG, DFG and points-to dumps")
      ->envname("SOLFIX_DUMP_GRAPHS");
  app.add_option("--jobs,-j", config.jobs, "Files processed in parallel")
      ->check(CLI::PositiveNumber)
      ->envname("SOLFIX_JOBS")
      ->capture_default_str();
  app.add_option("--patched", config.patched, "Patched file to check against the input (verify mode)")
      ->envname("SOLFIX_PATCHED");
  const char* flag_names[] = {"unhandled-exception", "reentrancy", "missing-input-validation",
                              "locked-ether"};
  const char* env_names[] = {"UNHANDLED_EXCEPTION", "REENTRANCY", "MISSING_INPUT_VALIDATION",
                             "LOCKED_ETHER"};
  for (std::size_t i = 0; i < detect::kAllClasses.size(); ++i) {
    app.add_option(std::string("--threshold-") + flag_names[i], config.thresholds[i],
                   std::string("Votes needed for ") + detect::to_string(detect::kAllClasses[i]))
        ->check(CLI::Range(1, 3))
        ->envname(std::string("SOLFIX_THRESHOLD_") + env_names[i])
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.mode = *pipeline::parse_mode(mode);
  config.force_lock = reentrancy == "lock";
  config.format = format == "text" ? pipeline::Format::Text : pipeline::Format::Json;
  if (config.mode == pipeline::Mode::Verify) {
    if (config.patched.empty() || config.inputs.size() != 1) {
      std::cerr << "solfix: verify mode needs one input and --patched\n";
      return 2;
    }
  }

  pipeline::RunResult result = pipeline::run(config);
  if (config.format == pipeline::Format::Json)
    std::cout << pipeline::report_json(result);
  else
    std::cout << pipeline::report_text(result);
  return result.exit_code();
}
