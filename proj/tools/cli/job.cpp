#include "cli/job.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "lkoethe/conditions.hpp"
#include "lkoethe/errors.hpp"
#include "lkoethe/extractor.hpp"
#include "lkoethe/koethe.hpp"
#include "lkoethe/log_math.hpp"
#include "lkoethe/operators.hpp"
#include "lkoethe/report.hpp"
#include "lkoethe/seqnorm.hpp"
#include "lkoethe/spec_io.hpp"

namespace lkoethe::cli {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::size_t> default_ladder(std::size_t dims) {
  std::vector<std::size_t> out;
  for (std::size_t rung : {(dims + 15) / 16, (dims + 3) / 4, dims}) {
    if (rung >= 1 && (out.empty() || rung > out.back())) out.push_back(rung);
  }
  return out;
}

struct Inputs {
  std::optional<KoetheMatrixSpec> a_spec, b_spec;
  std::optional<OperatorRep> op;
  json digests = json::object();
};

Inputs load_inputs(const JobConfig& config, bool need_matrices, bool need_op) {
  Inputs in;
  if (need_matrices) {
    if (config.a_path.empty() || config.b_path.empty()) {
      throw InvalidInput(command_name(config.command) + " needs --a and --b");
    }
    in.a_spec = load_matrix_spec(config.a_path);
    in.b_spec = load_matrix_spec(config.b_path);
    in.digests["a"] = spec_digest(*in.a_spec);
    in.digests["b"] = spec_digest(*in.b_spec);
  }
  if (need_op) {
    if (config.op_path.empty()) throw InvalidInput(command_name(config.command) + " needs --op");
    in.op = load_operator_spec(config.op_path);
    in.digests["op"] = spec_digest(*in.op);
  }
  return in;
}

// Explicit flags are taken as given (and rejected downstream when too large);
// missing ones default to 3 clamped to what the matrices support.
Budget fit_budget(const JobConfig& config, const KoetheMatrix& a, const KoetheMatrix& b,
                  std::span<const Schedule> schedules) {
  const auto pick = [](const std::optional<std::size_t>& flag, std::size_t cap) {
    return flag ? *flag : std::max<std::size_t>(1, std::min<std::size_t>(3, cap));
  };
  const auto& f = config.budget;
  Budget budget;
  budget.divergence_ratio = config.divergence_ratio;
  budget.ladder = config.ladder.empty() ? default_ladder(std::min(a.dims(), b.dims())) : config.ladder;
  if (config.command == Command::kCheckB) {
    budget.max_N = pick(f.max_N, a.levels());
    budget.max_r = pick(f.max_r, b.levels());
    std::size_t k0_cap = b.levels();
    if (!f.max_k0) {
      // Largest k0 every schedule can follow inside A's levels.
      for (const auto& s : schedules) {
        while (k0_cap > 1 && s.at(k0_cap) > a.levels()) --k0_cap;
      }
    }
    budget.max_k0 = pick(f.max_k0, k0_cap);
  } else {
    // Pair order (B, A): p, k, l index A; q, s, r index B.
    budget.max_p = pick(f.max_p, a.levels());
    budget.max_k = pick(f.max_k, a.levels());
    budget.max_l = pick(f.max_l, a.levels());
    budget.max_q = pick(f.max_q, b.levels());
    budget.max_s = pick(f.max_s, b.levels());
    budget.max_r2 = pick(f.max_r2, b.levels());
  }
  return budget;
}

json run_check(const JobConfig& config, const Inputs& in, json& echo) {
  const KoetheMatrix a = KoetheMatrix::build(*in.a_spec);
  const KoetheMatrix b = KoetheMatrix::build(*in.b_spec);
  std::vector<Schedule> schedules;
  if (config.command == Command::kCheckB) {
    if (config.schedules.empty()) throw InvalidInput("check-b needs at least one schedule");
    for (const auto& s : config.schedules) schedules.push_back(Schedule::parse(s));
  }
  const Budget budget = fit_budget(config, a, b, schedules);
  echo["budget"] = to_json(budget, config.command == Command::kCheckB
                                       ? ConditionKind::kBoundedPair
                                       : ConditionKind::kConditionS);
  if (config.command == Command::kCheckB) echo["schedules"] = config.schedules;

  const Verdict verdict = config.command == Command::kCheckB
                              ? check_bounded_pair(a, b, schedules, budget)
                              : check_condition_s(b, a, budget);
  json out = to_json(verdict);
  out["budget"] = echo["budget"];
  out["pair"] = config.command == Command::kCheckB ? json{{"a", in.digests["a"]}, {"b", in.digests["b"]}}
                                                   : json{{"b", in.digests["b"]}, {"a", in.digests["a"]}};
  return out;
}

json run_extract(const JobConfig& config, const Inputs& in, json& echo) {
  echo["k_cycle"] = config.k_cycle;
  echo["selections"] = config.selections;
  echo["samples"] = config.samples;
  echo["cbs_min_size"] = config.cbs_min_size;
  const KoetheMatrix a = KoetheMatrix::build(*in.a_spec);
  const KoetheMatrix b = KoetheMatrix::build(*in.b_spec);
  const NormSpec norm = NormSpec::parse(config.norm);
  const OperatorRep& op = *in.op;

  json out{{"outcome", "CERTIFIED"}};
  try {
    const auto cert = continuity_certificate(op, a, b, norm);
    const auto regrade = regrade_wlog(a, op, b, norm, cert);
    out["regrade"] = to_json(regrade);
    ExtractOptions options;
    options.k_cycle = config.k_cycle;
    options.selections = config.selections;
    const auto extraction = extract_quasidiagonal(op, regrade.regraded, b, norm, options);
    json cert_json = to_json(extraction);
    out["selections"] = cert_json["selections"];
    out["certificate"] = cert_json;
    const auto verification =
        verify_extraction(extraction, regrade.regraded, b, norm, config.samples, config.seed);
    out["verification"] = to_json(verification);
    if (!verification.passed()) out["outcome"] = "VERIFICATION_FAILED";
    CbsOptions cbs_options;
    cbs_options.min_size = config.cbs_min_size;
    out["cbs"] = to_json(cbs_search(extraction.d, regrade.regraded, b, cbs_options), cbs_options);
  } catch (const ContinuityFailure& e) {
    out["outcome"] = "ContinuityFailure";
    out["level"] = e.level();
    out["message"] = e.what();
  } catch (const SelectionNotFound& e) {
    out["outcome"] = e.code();
    out["j"] = e.j();
    out["message"] = e.what();
  }
  return out;
}

// Matrices for probe/opnorm limited to what the oracle can handle.
json oracle_json(const OperatorRep& op, const KoetheMatrix& a, const KoetheMatrix& b,
                 const NormSpec& norm, const JobConfig& config) {
  const std::size_t da = std::min(a.dims(), kOracleDimCap);
  const std::size_t db = std::min(b.dims(), kOracleDimCap);
  const auto ta = a.truncate(a.levels(), da);
  const auto tb = b.truncate(b.levels(), db);
  const auto restricted = restrict_operator(op, da, db);
  const double lower =
      log_opnorm_oracle(restricted, ta, tb, norm, config.p, config.q, config.oracle, config.seed);
  return json{{"budget", config.oracle},
              {"domain_dims", da},
              {"range_dims", db},
              {"log_lower_bound", log_value_json(lower)}};
}

json run_opnorm(const JobConfig& config, const Inputs& in, const OperatorRep& op, json& echo) {
  echo["p"] = config.p;
  echo["q"] = config.q;
  echo["oracle"] = config.oracle;
  const KoetheMatrix a = KoetheMatrix::build(*in.a_spec);
  const KoetheMatrix b = KoetheMatrix::build(*in.b_spec);
  if (config.p < 1 || config.p > b.levels() || config.q < 1 || config.q > a.levels()) {
    throw IndexError("--p must lie in 1.." + std::to_string(b.levels()) + " and --q in 1.." +
                     std::to_string(a.levels()));
  }
  const NormSpec norm = NormSpec::parse(config.norm);
  const auto restricted = restrict_operator(op, a.dims(), b.dims());
  json out{{"operator", kind_name(op)}, {"p", config.p}, {"q", config.q}};
  const auto exact = log_opnorm_exact(restricted, a, b, norm, config.p, config.q);
  out["log_exact"] = exact ? log_value_json(*exact) : json(nullptr);
  out["log_upper_bound"] =
      log_value_json(log_opnorm_upper_bound(restricted, a, b, norm, config.p, config.q));
  if (config.oracle > 0) out["oracle"] = oracle_json(restricted, a, b, norm, config);
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ValidationFailed*>(&e) || dynamic_cast<const CapExceeded*>(&e) ||
      dynamic_cast<const IndexError*>(&e) || dynamic_cast<const DimMismatch*>(&e) ||
      dynamic_cast<const BudgetTooLargeForTruncation*>(&e) ||
      dynamic_cast<const InvalidCertificate*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace

std::string command_name(Command command) {
  switch (command) {
    case Command::kCheckB: return "check-b";
    case Command::kCheckS: return "check-s";
    case Command::kExtract: return "extract";
    case Command::kProbe: return "probe";
    case Command::kOpnorm: return "opnorm";
  }
  return "unknown";
}

JobResult execute_job(const JobConfig& config, const std::optional<std::string>& timestamp) {
  JobResult result;
  json echo{{"command", command_name(config.command)},
            {"norm", config.norm},
            {"seed", config.seed},
            {"divergence_ratio", config.divergence_ratio}};
  json body;
  try {
    switch (config.command) {
      case Command::kCheckB:
      case Command::kCheckS: {
        const Inputs in = load_inputs(config, true, false);
        echo["inputs"] = in.digests;
        body = run_check(config, in, echo);
        break;
      }
      case Command::kExtract: {
        const Inputs in = load_inputs(config, true, true);
        echo["inputs"] = in.digests;
        body = run_extract(config, in, echo);
        break;
      }
      case Command::kProbe: {
        Inputs in = load_inputs(config, true, false);
        const OperatorRep op = rank_one_probe(config.i, config.v);
        in.digests["op"] = spec_digest(op);
        echo["inputs"] = in.digests;
        echo["i"] = config.i;
        echo["v"] = config.v;
        body = run_opnorm(config, in, op, echo);
        break;
      }
      case Command::kOpnorm: {
        const Inputs in = load_inputs(config, true, true);
        echo["inputs"] = in.digests;
        body = run_opnorm(config, in, *in.op, echo);
        break;
      }
    }
    body["status"] = "ok";
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    body = json{{"status", "error"}, {"error", e.what()}};
  }

  json report = std::move(body);
  report["tool"] = "lkoethe";
  report["version"] = LKOETHE_VERSION;
  report["command"] = command_name(config.command);
  report["seed"] = config.seed;
  report["config"] = echo;
  report["config_digest"] = sha256_hex(echo.dump());
  report["timestamp"] = timestamp ? *timestamp : utc_now();
  result.report = std::move(report);
  return result;
}

int run_job(const JobConfig& config) {
  JobResult result = execute_job(config);
  const std::string text = dump_document(result.report);
  if (config.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "lkoethe: cannot write '" << config.out_path.string() << "'\n";
      return 2;
    }
  }
  if (result.exit_code != 0) std::cerr << "lkoethe: " << result.report["error"].get<std::string>() << "\n";
  return result.exit_code;
}

}  // namespace lkoethe::cli
