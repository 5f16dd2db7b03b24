#include "lkoethe/errors.hpp"

#include <sstream>
#include <utility>

namespace lkoethe {

namespace {

std::string describe(const std::string& what, const std::vector<MatrixViolation>& violations) {
  std::ostringstream out;
  out << what << " (" << violations.size() << " violation" << (violations.size() == 1 ? "" : "s")
      << ")";
  constexpr std::size_t kShown = 8;
  for (std::size_t i = 0; i < violations.size() && i < kShown; ++i) {
    const auto& v = violations[i];
    out << "; n=" << v.index << ", k=" << v.level;
    if (v.level_to != v.level) out << "->" << v.level_to;
    out << ": " << v.reason;
  }
  if (violations.size() > kShown) out << "; ...";
  return out.str();
}

}  // namespace

ValidationFailed::ValidationFailed(const std::string& what, std::vector<MatrixViolation> violations)
    : Error(describe(what, violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t line, std::string field, const std::string& message)
    : Error("line " + std::to_string(line) + (field.empty() ? "" : ", field '" + field + "'") +
            ": " + message),
      line_(line),
      field_(std::move(field)) {}

}  // namespace lkoethe
