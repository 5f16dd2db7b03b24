#include <CLI11.hpp>

#include <iostream>

#include "cli/job.hpp"

namespace {

using lkoethe::cli::Command;
using lkoethe::cli::JobConfig;

void add_common(CLI::App* sub, JobConfig& config) {
  sub->add_option("--a", config.a_path, "domain matrix spec (A)");
  sub->add_option("--b", config.b_path, "range matrix spec (B)");
  sub->add_option("--norm", config.norm, "l1 | l2 | lp:<p> | c0")->capture_default_str();
  sub->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", config.out_path, "report path (default: stdout)");
}

void add_ladder(CLI::App* sub, JobConfig& config) {
  sub->add_option("--ladder", config.ladder, "truncation ladder, e.g. 16,64,256")->delimiter(',');
  sub->add_option("--ratio", config.divergence_ratio, "divergence ratio")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuity, boundedness and quasi-diagonal extraction on l-Köthe spaces"};
  app.set_version_flag("--version", std::string(LKOETHE_VERSION));
  app.require_subcommand(1);

  JobConfig config;
  auto& budget = config.budget;

  auto* check_b = app.add_subcommand("check-b", "bounded-pair quantifier search on (A, B)");
  add_common(check_b, config);
  add_ladder(check_b, config);
  check_b->add_option("--schedules", config.schedules, "level maps N(k), e.g. k+1,2k,k^2")
      ->delimiter(',');
  check_b->add_option("--max-N", budget.max_N);
  check_b->add_option("--max-r", budget.max_r);
  check_b->add_option("--max-k0", budget.max_k0);

  auto* check_s = app.add_subcommand("check-s", "condition S on the pair (B, A)");
  add_common(check_s, config);
  add_ladder(check_s, config);
  check_s->add_option("--max-p", budget.max_p);
  check_s->add_option("--max-q", budget.max_q);
  check_s->add_option("--max-k", budget.max_k);
  check_s->add_option("--max-s", budget.max_s);
  check_s->add_option("--max-l", budget.max_l);
  check_s->add_option("--max-r", budget.max_r2);

  auto* extract = app.add_subcommand("extract", "quasi-diagonal extraction certificate");
  add_common(extract, config);
  extract->add_option("--op", config.op_path, "operator spec (T)");
  extract->add_option("--kcycle", config.k_cycle, "levels cycled by k_j")->capture_default_str();
  extract->add_option("--j", config.selections, "number of selections J")->capture_default_str();
  extract->add_option("--samples", config.samples, "verification samples")->capture_default_str();
  extract->add_option("--cbs-min", config.cbs_min_size, "minimum common-basic-subspace size")
      ->capture_default_str();

  auto* probe = app.add_subcommand("probe", "operator seminorm of the rank-one map e_i' ⊗ e_v");
  add_common(probe, config);
  probe->add_option("--i", config.i)->required();
  probe->add_option("--v", config.v)->required();
  probe->add_option("--p", config.p)->required();
  probe->add_option("--q", config.q)->required();
  probe->add_option("--oracle", config.oracle, "oracle random starts (0: off)");

  auto* opnorm = app.add_subcommand("opnorm", "operator seminorm ||T||_{p,q}");
  add_common(opnorm, config);
  opnorm->add_option("--op", config.op_path, "operator spec (T)");
  opnorm->add_option("--p", config.p)->required();
  opnorm->add_option("--q", config.q)->required();
  opnorm->add_option("--oracle", config.oracle, "oracle random starts (0: off)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check_b->parsed()) config.command = Command::kCheckB;
  if (check_s->parsed()) config.command = Command::kCheckS;
  if (extract->parsed()) config.command = Command::kExtract;
  if (probe->parsed()) config.command = Command::kProbe;
  if (opnorm->parsed()) config.command = Command::kOpnorm;

  try {
    return lkoethe::cli::run_job(config);
  } catch (const std::exception& e) {
    std::cerr << "lkoethe: internal error: " << e.what() << "\n";
    return 1;
  }
}
