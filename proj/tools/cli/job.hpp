#pragma once

// One batch job of the lkoethe tool: load specs, run a checker or the
// extraction pipeline, and produce a single JSON report.
//
// Exit codes: 0 for any completed verdict (including DIVERGENT_C and
// INCONCLUSIVE), 2 for invalid input, 1 for internal failures.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lkoethe::cli {

enum class Command { kCheckB, kCheckS, kExtract, kProbe, kOpnorm };

std::string command_name(Command command);

struct BudgetFlags {
  std::optional<std::size_t> max_N, max_r, max_k0;
  std::optional<std::size_t> max_p, max_q, max_k, max_s, max_l, max_r2;
};

struct JobConfig {
  Command command = Command::kCheckB;
  std::filesystem::path a_path;
  std::filesystem::path b_path;
  std::filesystem::path op_path;
  std::filesystem::path out_path;  // empty: stdout

  std::string norm = "l1";
  std::vector<std::string> schedules{"k+1"};
  std::vector<std::size_t> ladder;  // empty: {d/16, d/4, d}
  BudgetFlags budget;
  double divergence_ratio = 1.5;

  // extract
  std::size_t k_cycle = 2;
  std::size_t selections = 8;
  std::size_t samples = 200;
  std::size_t cbs_min_size = 8;

  // probe / opnorm
  std::size_t i = 1;
  std::size_t v = 1;
  std::size_t p = 1;
  std::size_t q = 1;
  std::size_t oracle = 0;  // oracle budget; 0 disables

  std::uint64_t seed = 1;
};

struct JobResult {
  int exit_code = 0;
  nlohmann::json report;
};

// Builds the report without writing it. `timestamp` overrides the clock
// (tests pin it to compare reports byte for byte).
JobResult execute_job(const JobConfig& config,
                      const std::optional<std::string>& timestamp = std::nullopt);

// execute_job plus writing exactly one report to config.out_path (or
// stdout). Returns the exit code.
int run_job(const JobConfig& config);

}  // namespace lkoethe::cli
