#pragma once

// JSON forms of verdicts, certificates and diagnostics. Log-values that are
// not finite are written as the strings "-inf", "inf" or "nan" so that every
// document survives a dump/parse cycle.

#include <nlohmann/json.hpp>

#include "lkoethe/conditions.hpp"
#include "lkoethe/extractor.hpp"
#include "lkoethe/operators.hpp"

namespace lkoethe {

nlohmann::json log_value_json(double log_value);
double log_value_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Budget& budget, ConditionKind condition);
nlohmann::json to_json(const Branch& branch);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const ContinuityCertificate& cert);
nlohmann::json to_json(const RegradeResult& regrade);
nlohmann::json to_json(const ExtractionCertificate& cert);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const CbsResult& result, const CbsOptions& options);
nlohmann::json to_json(const BoundednessDiagnostic& diagnostic);

// Reads back the certificate part written by to_json(ExtractionCertificate).
ExtractionCertificate extraction_certificate_from_json(const nlohmann::json& j);

// Stable text form: sorted keys, two-space indent, trailing newline.
std::string dump_document(const nlohmann::json& j);

}  // namespace lkoethe
