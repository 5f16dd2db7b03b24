#pragma once

// Budgeted quantifier searches for the bounded-pair characterization
//
//   for every N(k) there is N such that for every r there are k0, C with
//   b_v^r / a_i^N <= C max_{k<=k0} b_v^k / a_i^{N(k)}   for all v, i
//
// and for condition S on the pair (lambda(B), lambda(A)):
//
//   for all p there are q, k such that for all s, l there are r, C with
//   b_m^s / a_n^k <= C max{ b_m^q / a_n^p, b_m^r / a_n^l }.
//
// A fixed truncation always admits a finite C, so verdicts come from the
// trend of the minimal C over a truncation ladder (see ladder.hpp).

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lkoethe/expr.hpp"
#include "lkoethe/koethe.hpp"
#include "lkoethe/ladder.hpp"

namespace lkoethe {

// Strictly increasing level map k -> N(k) >= 1.
class Schedule {
 public:
  // A formula in k ("k+1", "2k", "k^2") or an explicit list "list:1:3:7".
  static Schedule parse(std::string_view text);
  static Schedule from_list(std::string name, std::vector<std::size_t> values);

  const std::string& name() const noexcept { return name_; }
  // Throws InvalidInput when N(k) is undefined, non-integral or < 1.
  std::size_t at(std::size_t k) const;
  // Throws InvalidInput unless N(1) < N(2) < ... < N(levels).
  void validate(std::size_t levels) const;

 private:
  Schedule() = default;

  std::string name_;
  std::optional<Expression> formula_;
  std::vector<std::size_t> values_;
};

struct Budget {
  // Bounded-pair side.
  std::size_t max_N = 3;
  std::size_t max_r = 3;
  std::size_t max_k0 = 3;
  // Condition-S side.
  std::size_t max_p = 3;
  std::size_t max_q = 3;
  std::size_t max_k = 3;
  std::size_t max_s = 3;
  std::size_t max_l = 3;
  std::size_t max_r2 = 3;

  std::vector<std::size_t> ladder;
  double divergence_ratio = kDefaultDivergenceRatio;
};

enum class ConditionKind { kBoundedPair, kConditionS };
enum class VerdictStatus { kHoldsStableC, kDivergentC, kInconclusive };

std::string_view to_string(ConditionKind kind);
std::string_view to_string(VerdictStatus status);

using Assignment = std::vector<std::pair<std::string, std::size_t>>;

// One fully assigned quantifier branch and its minimal-C ladder.
struct Branch {
  std::string schedule;  // empty for condition S
  Assignment assignment;
  std::vector<double> log_c;  // per ladder rung
  LadderTrend trend = LadderTrend::kUndetermined;
};

struct Verdict {
  ConditionKind condition = ConditionKind::kBoundedPair;
  VerdictStatus status = VerdictStatus::kInconclusive;
  std::vector<std::size_t> ladder;
  std::vector<std::string> schedules;
  std::vector<Branch> branches;        // every evaluated branch, in search order
  std::vector<Branch> witnesses;       // chosen existential assignments
  std::vector<Branch> counterexample;  // divergent branches behind DIVERGENT_C
  std::string note;
};

// Least C for the bounded-pair inequality over v, i <= truncation.
double log_minimal_c_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                          std::size_t N, std::size_t r, std::size_t k0, std::size_t truncation);
double minimal_c_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                      std::size_t N, std::size_t r, std::size_t k0, std::size_t truncation);
// All rungs in a single pass over the largest grid.
std::vector<double> log_minimal_c_thm2_ladder(const KoetheMatrix& a, const KoetheMatrix& b,
                                              const Schedule& schedule, std::size_t N,
                                              std::size_t r, std::size_t k0,
                                              std::span<const std::size_t> ladder);

// Least C for the condition-S inequality over m, n <= truncation. Levels
// q, s, r index B; p, k, l index A.
double log_minimal_c_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                            std::size_t q, std::size_t k, std::size_t s, std::size_t l,
                            std::size_t r, std::size_t truncation);
double minimal_c_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                        std::size_t q, std::size_t k, std::size_t s, std::size_t l, std::size_t r,
                        std::size_t truncation);
std::vector<double> log_minimal_c_cond_s_ladder(const KoetheMatrix& b, const KoetheMatrix& a,
                                                std::size_t p, std::size_t q, std::size_t k,
                                                std::size_t s, std::size_t l, std::size_t r,
                                                std::span<const std::size_t> ladder);

// Throws BudgetTooLargeForTruncation when the budget reaches past the
// matrices' levels or the ladder past their dimensions.
Verdict check_bounded_pair(const KoetheMatrix& a, const KoetheMatrix& b,
                           std::span<const Schedule> schedules, const Budget& budget);
Verdict check_condition_s(const KoetheMatrix& b, const KoetheMatrix& a, const Budget& budget);

// Exhaustive re-check of a witnessed inequality with C * (1 + 1e-12).
bool inequality_holds_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                           std::size_t N, std::size_t r, std::size_t k0, double log_c,
                           std::size_t truncation);
bool inequality_holds_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                             std::size_t q, std::size_t k, std::size_t s, std::size_t l,
                             std::size_t r, double log_c, std::size_t truncation);

// Value of `name` in a branch assignment.
std::optional<std::size_t> assigned(const Branch& branch, std::string_view name);

}  // namespace lkoethe
