#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lkoethe {

// Root of every error the library throws. Verdicts (divergent, inconclusive)
// are data and never surface as exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : Error(what + ": size " + std::to_string(requested) + " exceeds cap " +
              std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

// One offending Köthe-matrix cell. `level_to` is set for level-monotonicity
// violations (a_n^k > a_n^{k+1}) and equals `level` for positivity failures.
struct MatrixViolation {
  std::size_t index;
  std::size_t level;
  std::size_t level_to;
  std::string reason;
};

class ValidationFailed : public Error {
 public:
  ValidationFailed(const std::string& what, std::vector<MatrixViolation> violations);

  const std::vector<MatrixViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<MatrixViolation> violations_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class BudgetTooLargeForTruncation : public Error {
 public:
  using Error::Error;
};

class InvalidCertificate : public Error {
 public:
  using Error::Error;
};

// No N(k) up to the search cap keeps ||T||_{k,N(k)} finite and non-divergent.
class ContinuityFailure : public Error {
 public:
  explicit ContinuityFailure(std::size_t level)
      : Error("no admissible N(k) found for level k=" + std::to_string(level)),
        level_(level) {}

  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

// The truncation is too small to realize the j-th selection of the
// quasi-diagonal extraction.
class SelectionNotFound : public Error {
 public:
  enum class Stage { kDomainIndex, kRangeIndex };

  SelectionNotFound(Stage stage, std::size_t j)
      : Error(std::string(stage == Stage::kDomainIndex ? "NjNotFound" : "VjNotFound") +
              "(" + std::to_string(j) + ")"),
        stage_(stage),
        j_(j) {}

  Stage stage() const noexcept { return stage_; }
  std::size_t j() const noexcept { return j_; }
  const char* code() const noexcept {
    return stage_ == Stage::kDomainIndex ? "NjNotFound" : "VjNotFound";
  }

 private:
  Stage stage_;
  std::size_t j_;
};

}  // namespace lkoethe
