#include "lkoethe/report.hpp"

#include <cmath>
#include <limits>

#include "lkoethe/errors.hpp"

namespace lkoethe {

using nlohmann::json;

json log_value_json(double log_value) {
  if (std::isnan(log_value)) return "nan";
  if (std::isinf(log_value)) return log_value < 0 ? "-inf" : "inf";
  return log_value;
}

double log_value_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidInput("expected a log-value, got " + j.dump());
}

namespace {

json log_array(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(log_value_json(v));
  return out;
}

json assignment_json(const Assignment& assignment) {
  json out = json::object();
  for (const auto& [name, value] : assignment) out[name] = value;
  return out;
}

json branches_json(const std::vector<Branch>& branches) {
  json out = json::array();
  for (const auto& b : branches) out.push_back(to_json(b));
  return out;
}

json clause_json(const ClauseResult& clause) {
  return json{{"passed", clause.passed}, {"failures", clause.failures}};
}

}  // namespace

json to_json(const Budget& budget, ConditionKind condition) {
  json out{{"ladder", budget.ladder}, {"divergence_ratio", budget.divergence_ratio}};
  if (condition == ConditionKind::kBoundedPair) {
    out["max_N"] = budget.max_N;
    out["max_r"] = budget.max_r;
    out["max_k0"] = budget.max_k0;
  } else {
    out["max_p"] = budget.max_p;
    out["max_q"] = budget.max_q;
    out["max_k"] = budget.max_k;
    out["max_s"] = budget.max_s;
    out["max_l"] = budget.max_l;
    out["max_r"] = budget.max_r2;
  }
  return out;
}

json to_json(const Branch& branch) {
  json out{{"assignment", assignment_json(branch.assignment)},
           {"log_C", log_array(branch.log_c)},
           {"trend", std::string(to_string(branch.trend))},
           {"divergent", branch.trend == LadderTrend::kDivergent}};
  if (!branch.schedule.empty()) out["schedule"] = branch.schedule;
  return out;
}

json to_json(const Verdict& verdict) {
  json out{{"condition", std::string(to_string(verdict.condition))},
           {"verdict", std::string(to_string(verdict.status))},
           {"ladder", verdict.ladder},
           {"branches", branches_json(verdict.branches)},
           {"witnesses", branches_json(verdict.witnesses)},
           {"counterexample", branches_json(verdict.counterexample)}};
  if (!verdict.schedules.empty()) out["schedules"] = verdict.schedules;
  if (!verdict.note.empty()) out["note"] = verdict.note;
  return out;
}

json to_json(const ContinuityCertificate& cert) {
  json rows = json::array();
  for (const auto& r : cert.rows) {
    rows.push_back({{"k", r.level}, {"N", r.domain_level}, {"log_M", log_value_json(r.log_bound)}});
  }
  return rows;
}

json to_json(const RegradeResult& regrade) {
  json schedule = json::array();
  for (const auto& r : regrade.certificate.rows) schedule.push_back(r.domain_level);
  return json{{"N", schedule},
              {"log_M", log_array(regrade.log_multipliers)},
              {"continuity", to_json(regrade.certificate)}};
}

json to_json(const ExtractionCertificate& cert) {
  json selections = json::array();
  for (const auto& s : cert.selections) {
    selections.push_back({{"j", s.j},
                          {"k_j", s.k_j},
                          {"n_j", s.n_j},
                          {"v_j", s.v_j},
                          {"log_t", log_value_json(s.log_t)},
                          {"log_ratio_T", log_value_json(s.log_ratio_t)},
                          {"log_ratio_D", log_value_json(s.log_ratio_d)}});
  }
  json d = json::array();
  for (const auto& e : cert.d.entries()) d.push_back(json::array({e.n, e.sigma, e.m}));
  return json{{"levels", cert.levels},
              {"k_cycle", cert.k_cycle},
              {"selections", selections},
              {"D", d}};
}

ExtractionCertificate extraction_certificate_from_json(const json& j) {
  ExtractionCertificate cert;
  cert.levels = j.at("levels").get<std::size_t>();
  cert.k_cycle = j.at("k_cycle").get<std::size_t>();
  for (const auto& s : j.at("selections")) {
    cert.selections.push_back({s.at("j").get<std::size_t>(), s.at("k_j").get<std::size_t>(),
                               s.at("n_j").get<std::size_t>(), s.at("v_j").get<std::size_t>(),
                               log_value_from_json(s.at("log_t")),
                               log_value_from_json(s.at("log_ratio_T")),
                               log_value_from_json(s.at("log_ratio_D"))});
  }
  std::vector<QuasiDiagonalEntry> entries;
  for (const auto& e : j.at("D")) {
    entries.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>()});
  }
  cert.d = QuasiDiagonalOperator(std::move(entries));
  return cert;
}

json to_json(const VerificationReport& report) {
  return json{{"passed", report.passed()},
              {"coordinate", clause_json(report.coordinate)},
              {"sampled", clause_json(report.sampled)},
              {"ratios", clause_json(report.ratios)}};
}

json to_json(const CbsResult& result, const CbsOptions& options) {
  auto rows = [](const std::vector<CbsRow>& table) {
    json out = json::array();
    for (const auto& r : table) {
      out.push_back({{"k", r.level}, {"k_prime", r.partner}, {"log_C", log_value_json(r.log_c)}});
    }
    return out;
  };
  return json{{"status", result.found ? "FOUND" : "INCONCLUSIVE"},
              {"subset", result.subset},
              {"lower", rows(result.lower)},
              {"upper", rows(result.upper)},
              {"min_size", options.min_size},
              {"max_log_C", options.max_log_c}};
}

json to_json(const BoundednessDiagnostic& diagnostic) {
  json rows = json::array();
  for (std::size_t r = 0; r < diagnostic.log_values.size(); ++r) {
    rows.push_back({{"r", r + 1},
                    {"log_norm", log_array(diagnostic.log_values[r])},
                    {"divergent", static_cast<bool>(diagnostic.divergent[r])},
                    {"exact", static_cast<bool>(diagnostic.exact[r])}});
  }
  return json{{"N", diagnostic.domain_level}, {"ladder", diagnostic.ladder}, {"levels", rows}};
}

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lkoethe
