#include "lkoethe/conditions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "lkoethe/errors.hpp"
#include "lkoethe/log_math.hpp"

namespace lkoethe {

namespace {

constexpr double kWitnessSlack = 1e-12;

void require_level(std::size_t level, std::size_t levels, const char* what) {
  if (level < 1 || level > levels) {
    throw IndexError(std::string(what) + "=" + std::to_string(level) + " outside 1.." +
                     std::to_string(levels));
  }
}

void require_truncation(std::span<const std::size_t> ladder, const KoetheMatrix& a,
                        const KoetheMatrix& b) {
  validate_ladder(ladder);
  if (ladder.back() > a.dims() || ladder.back() > b.dims()) {
    throw IndexError("truncation " + std::to_string(ladder.back()) +
                     " exceeds matrix dimensions (" + std::to_string(a.dims()) + ", " +
                     std::to_string(b.dims()) + ")");
  }
}

// rung_of[x] = index of the first rung >= x, for x = 1..ladder.back().
std::vector<std::size_t> rung_lookup(std::span<const std::size_t> ladder) {
  std::vector<std::size_t> rung_of(ladder.back() + 1, 0);
  std::size_t rung = 0;
  for (std::size_t x = 1; x <= ladder.back(); ++x) {
    while (ladder[rung] < x) ++rung;
    rung_of[x] = rung;
  }
  return rung_of;
}

std::vector<double> prefix_max(std::vector<double> shell) {
  for (std::size_t i = 1; i < shell.size(); ++i) shell[i] = std::max(shell[i], shell[i - 1]);
  return shell;
}

Assignment thm2_assignment(std::size_t N, std::size_t r, std::size_t k0) {
  return {{"N", N}, {"r", r}, {"k0", k0}};
}

}  // namespace

Schedule Schedule::parse(std::string_view text) {
  if (text.starts_with("list:")) {
    std::vector<std::size_t> values;
    std::size_t pos = 5;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find(':', pos), text.size());
      const auto token = text.substr(pos, end - pos);
      std::size_t value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw InvalidInput("schedule '" + std::string(text) + "': bad list entry '" +
                           std::string(token) + "'");
      }
      values.push_back(value);
      pos = end + 1;
    }
    return from_list(std::string(text), std::move(values));
  }
  Schedule s;
  s.name_ = std::string(text);
  s.formula_ = Expression::parse(text, {"k"});
  return s;
}

Schedule Schedule::from_list(std::string name, std::vector<std::size_t> values) {
  if (values.empty()) throw InvalidInput("schedule '" + name + "' is empty");
  Schedule s;
  s.name_ = std::move(name);
  s.values_ = std::move(values);
  s.validate(s.values_.size());
  return s;
}

std::size_t Schedule::at(std::size_t k) const {
  if (k < 1) throw InvalidInput("schedule levels are 1-based");
  if (!formula_) {
    if (k > values_.size()) {
      throw InvalidInput("schedule '" + name_ + "' defines only " +
                         std::to_string(values_.size()) + " levels");
    }
    return values_[k - 1];
  }
  const double arg = static_cast<double>(k);
  const double value = formula_->evaluate(std::span<const double>(&arg, 1));
  const double rounded = std::round(value);
  if (!std::isfinite(value) || std::fabs(value - rounded) > 1e-9 || rounded < 1.0) {
    throw InvalidInput("schedule '" + name_ + "' gives non-integral or < 1 value at k=" +
                       std::to_string(k));
  }
  return static_cast<std::size_t>(rounded);
}

void Schedule::validate(std::size_t levels) const {
  for (std::size_t k = 1; k <= levels; ++k) {
    const std::size_t value = at(k);
    if (value < 1) throw InvalidInput("schedule '" + name_ + "' must satisfy N(k) >= 1");
    if (k > 1 && value <= at(k - 1)) {
      throw InvalidInput("schedule '" + name_ + "' is not strictly increasing at k=" +
                         std::to_string(k));
    }
  }
}

std::string_view to_string(ConditionKind kind) {
  return kind == ConditionKind::kBoundedPair ? "thm2_B" : "condition_S";
}

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kHoldsStableC:
      return "HOLDS_STABLE_C";
    case VerdictStatus::kDivergentC:
      return "DIVERGENT_C";
    case VerdictStatus::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<double> log_minimal_c_thm2_ladder(const KoetheMatrix& a, const KoetheMatrix& b,
                                              const Schedule& schedule, std::size_t N,
                                              std::size_t r, std::size_t k0,
                                              std::span<const std::size_t> ladder) {
  require_truncation(ladder, a, b);
  require_level(N, a.levels(), "N");
  require_level(r, b.levels(), "r");
  require_level(k0, b.levels(), "k0");
  std::vector<std::span<const double>> a_sched(k0);
  std::vector<std::span<const double>> b_rows(k0);
  for (std::size_t k = 1; k <= k0; ++k) {
    const std::size_t nk = schedule.at(k);
    require_level(nk, a.levels(), "N(k)");
    a_sched[k - 1] = a.log_row(nk);
    b_rows[k - 1] = b.log_row(k);
  }
  const auto a_n = a.log_row(N);
  const auto b_r = b.log_row(r);

  const std::size_t t = ladder.back();
  const auto rung_of = rung_lookup(ladder);
  std::vector<double> shell(ladder.size(), kNegInf);
  for (std::size_t i = 1; i <= t; ++i) {
    for (std::size_t v = 1; v <= t; ++v) {
      double rhs = kNegInf;
      for (std::size_t k = 0; k < k0; ++k) {
        rhs = std::max(rhs, b_rows[k][v - 1] - a_sched[k][i - 1]);
      }
      const double value = b_r[v - 1] - a_n[i - 1] - rhs;
      auto& slot = shell[rung_of[std::max(v, i)]];
      slot = std::max(slot, value);
    }
  }
  return prefix_max(std::move(shell));
}

double log_minimal_c_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                          std::size_t N, std::size_t r, std::size_t k0, std::size_t truncation) {
  const std::size_t ladder[] = {truncation};
  return log_minimal_c_thm2_ladder(a, b, schedule, N, r, k0, ladder).back();
}

double minimal_c_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                      std::size_t N, std::size_t r, std::size_t k0, std::size_t truncation) {
  return std::exp(log_minimal_c_thm2(a, b, schedule, N, r, k0, truncation));
}

std::vector<double> log_minimal_c_cond_s_ladder(const KoetheMatrix& b, const KoetheMatrix& a,
                                                std::size_t p, std::size_t q, std::size_t k,
                                                std::size_t s, std::size_t l, std::size_t r,
                                                std::span<const std::size_t> ladder) {
  require_truncation(ladder, a, b);
  require_level(p, a.levels(), "p");
  require_level(k, a.levels(), "k");
  require_level(l, a.levels(), "l");
  require_level(q, b.levels(), "q");
  require_level(s, b.levels(), "s");
  require_level(r, b.levels(), "r");
  const auto bs = b.log_row(s);
  const auto bq = b.log_row(q);
  const auto br = b.log_row(r);
  const auto ak = a.log_row(k);
  const auto ap = a.log_row(p);
  const auto al = a.log_row(l);

  const std::size_t t = ladder.back();
  const auto rung_of = rung_lookup(ladder);
  std::vector<double> shell(ladder.size(), kNegInf);
  for (std::size_t n = 1; n <= t; ++n) {
    for (std::size_t m = 1; m <= t; ++m) {
      const double rhs = std::max(bq[m - 1] - ap[n - 1], br[m - 1] - al[n - 1]);
      const double value = bs[m - 1] - ak[n - 1] - rhs;
      auto& slot = shell[rung_of[std::max(m, n)]];
      slot = std::max(slot, value);
    }
  }
  return prefix_max(std::move(shell));
}

double log_minimal_c_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                            std::size_t q, std::size_t k, std::size_t s, std::size_t l,
                            std::size_t r, std::size_t truncation) {
  const std::size_t ladder[] = {truncation};
  return log_minimal_c_cond_s_ladder(b, a, p, q, k, s, l, r, ladder).back();
}

double minimal_c_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                        std::size_t q, std::size_t k, std::size_t s, std::size_t l, std::size_t r,
                        std::size_t truncation) {
  return std::exp(log_minimal_c_cond_s(b, a, p, q, k, s, l, r, truncation));
}

Verdict check_bounded_pair(const KoetheMatrix& a, const KoetheMatrix& b,
                           std::span<const Schedule> schedules, const Budget& budget) {
  validate_ladder(budget.ladder);
  if (schedules.empty()) throw InvalidInput("check_bounded_pair: no schedules given");
  if (budget.max_N < 1 || budget.max_r < 1 || budget.max_k0 < 1) {
    throw InvalidInput("budget bounds must be >= 1");
  }
  if (budget.ladder.back() > a.dims() || budget.ladder.back() > b.dims()) {
    throw BudgetTooLargeForTruncation("largest ladder rung " +
                                      std::to_string(budget.ladder.back()) +
                                      " exceeds matrix dimensions");
  }
  if (budget.max_N > a.levels() || budget.max_r > b.levels() || budget.max_k0 > b.levels()) {
    throw BudgetTooLargeForTruncation("max_N/max_r/max_k0 exceed available levels");
  }
  for (const auto& schedule : schedules) {
    schedule.validate(budget.max_k0);
    if (schedule.at(budget.max_k0) > a.levels()) {
      throw BudgetTooLargeForTruncation("schedule '" + schedule.name() + "' reaches level " +
                                        std::to_string(schedule.at(budget.max_k0)) +
                                        " beyond the domain matrix");
    }
  }

  Verdict verdict;
  verdict.condition = ConditionKind::kBoundedPair;
  verdict.ladder = budget.ladder;
  for (const auto& s : schedules) verdict.schedules.push_back(s.name());
  if (budget.ladder.size() < 3) {
    verdict.status = VerdictStatus::kInconclusive;
    verdict.note = "ladder has fewer than 3 rungs; a finite truncation always admits a finite C";
    return verdict;
  }

  bool all_hold = true;
  bool any_diverges = false;
  for (const auto& schedule : schedules) {
    bool holds = false;
    bool diverges = true;
    std::vector<Branch> schedule_trace;
    for (std::size_t N = 1; N <= budget.max_N && !holds; ++N) {
      bool n_works = true;
      bool n_has_divergent_r = false;
      std::vector<Branch> n_witnesses;
      for (std::size_t r = 1; r <= budget.max_r; ++r) {
        bool satisfied = false;
        bool all_divergent = true;
        std::vector<Branch> r_branches;
        for (std::size_t k0 = 1; k0 <= budget.max_k0; ++k0) {
          Branch branch{schedule.name(), thm2_assignment(N, r, k0),
                        log_minimal_c_thm2_ladder(a, b, schedule, N, r, k0, budget.ladder),
                        LadderTrend::kUndetermined};
          branch.trend = classify_ladder(branch.log_c, budget.divergence_ratio);
          verdict.branches.push_back(branch);
          if (branch.trend == LadderTrend::kStable) {
            satisfied = true;
            n_witnesses.push_back(branch);
            break;
          }
          if (branch.trend != LadderTrend::kDivergent) all_divergent = false;
          r_branches.push_back(std::move(branch));
        }
        if (satisfied) continue;
        n_works = false;
        if (all_divergent) {
          n_has_divergent_r = true;
          schedule_trace.insert(schedule_trace.end(), r_branches.begin(), r_branches.end());
          break;
        }
      }
      if (n_works) {
        holds = true;
        verdict.witnesses.insert(verdict.witnesses.end(), n_witnesses.begin(), n_witnesses.end());
      } else if (!n_has_divergent_r) {
        diverges = false;
      }
    }
    if (!holds) all_hold = false;
    if (!holds && diverges) {
      if (!any_diverges) verdict.counterexample = std::move(schedule_trace);
      any_diverges = true;
    }
  }

  if (any_diverges) {
    verdict.status = VerdictStatus::kDivergentC;
    verdict.witnesses.clear();
  } else if (all_hold) {
    verdict.status = VerdictStatus::kHoldsStableC;
  } else {
    verdict.status = VerdictStatus::kInconclusive;
    verdict.witnesses.clear();
    verdict.note = "some schedule neither stabilized nor diverged within budget";
  }
  return verdict;
}

Verdict check_condition_s(const KoetheMatrix& b, const KoetheMatrix& a, const Budget& budget) {
  validate_ladder(budget.ladder);
  for (std::size_t bound : {budget.max_p, budget.max_q, budget.max_k, budget.max_s, budget.max_l,
                            budget.max_r2}) {
    if (bound < 1) throw InvalidInput("budget bounds must be >= 1");
  }
  if (budget.ladder.back() > a.dims() || budget.ladder.back() > b.dims()) {
    throw BudgetTooLargeForTruncation("largest ladder rung " +
                                      std::to_string(budget.ladder.back()) +
                                      " exceeds matrix dimensions");
  }
  if (budget.max_p > a.levels() || budget.max_k > a.levels() || budget.max_l > a.levels() ||
      budget.max_q > b.levels() || budget.max_s > b.levels() || budget.max_r2 > b.levels()) {
    throw BudgetTooLargeForTruncation("condition-S budget exceeds available levels");
  }

  Verdict verdict;
  verdict.condition = ConditionKind::kConditionS;
  verdict.ladder = budget.ladder;
  if (budget.ladder.size() < 3) {
    verdict.status = VerdictStatus::kInconclusive;
    verdict.note = "ladder has fewer than 3 rungs; a finite truncation always admits a finite C";
    return verdict;
  }

  bool all_hold = true;
  bool any_diverges = false;
  for (std::size_t p = 1; p <= budget.max_p; ++p) {
    bool p_holds = false;
    bool p_diverges = true;
    std::vector<Branch> p_trace;
    for (std::size_t q = 1; q <= budget.max_q && !p_holds; ++q) {
      for (std::size_t k = 1; k <= budget.max_k && !p_holds; ++k) {
        bool qk_works = true;
        bool qk_has_divergent = false;
        std::vector<Branch> qk_witnesses;
        for (std::size_t s = 1; s <= budget.max_s && !qk_has_divergent; ++s) {
          for (std::size_t l = 1; l <= budget.max_l && !qk_has_divergent; ++l) {
            bool satisfied = false;
            bool all_divergent = true;
            std::vector<Branch> sl_branches;
            for (std::size_t r = 1; r <= budget.max_r2; ++r) {
              Branch branch{"",
                            {{"p", p}, {"q", q}, {"k", k}, {"s", s}, {"l", l}, {"r", r}},
                            log_minimal_c_cond_s_ladder(b, a, p, q, k, s, l, r, budget.ladder),
                            LadderTrend::kUndetermined};
              branch.trend = classify_ladder(branch.log_c, budget.divergence_ratio);
              verdict.branches.push_back(branch);
              if (branch.trend == LadderTrend::kStable) {
                satisfied = true;
                qk_witnesses.push_back(branch);
                break;
              }
              if (branch.trend != LadderTrend::kDivergent) all_divergent = false;
              sl_branches.push_back(std::move(branch));
            }
            if (satisfied) continue;
            qk_works = false;
            if (all_divergent) {
              qk_has_divergent = true;
              p_trace.insert(p_trace.end(), sl_branches.begin(), sl_branches.end());
            }
          }
        }
        if (qk_works) {
          p_holds = true;
          verdict.witnesses.insert(verdict.witnesses.end(), qk_witnesses.begin(),
                                   qk_witnesses.end());
        } else if (!qk_has_divergent) {
          p_diverges = false;
        }
      }
    }
    if (!p_holds) all_hold = false;
    if (!p_holds && p_diverges) {
      if (!any_diverges) verdict.counterexample = std::move(p_trace);
      any_diverges = true;
    }
  }

  if (any_diverges) {
    verdict.status = VerdictStatus::kDivergentC;
    verdict.witnesses.clear();
  } else if (all_hold) {
    verdict.status = VerdictStatus::kHoldsStableC;
  } else {
    verdict.status = VerdictStatus::kInconclusive;
    verdict.witnesses.clear();
    verdict.note = "some p neither stabilized nor diverged within budget";
  }
  return verdict;
}

bool inequality_holds_thm2(const KoetheMatrix& a, const KoetheMatrix& b, const Schedule& schedule,
                           std::size_t N, std::size_t r, std::size_t k0, double log_c,
                           std::size_t truncation) {
  const double bound = log_c + std::log1p(kWitnessSlack);
  for (std::size_t i = 1; i <= truncation; ++i) {
    for (std::size_t v = 1; v <= truncation; ++v) {
      double rhs = kNegInf;
      for (std::size_t k = 1; k <= k0; ++k) {
        rhs = std::max(rhs, b.log_entry(k, v) - a.log_entry(schedule.at(k), i));
      }
      if (b.log_entry(r, v) - a.log_entry(N, i) > bound + rhs) return false;
    }
  }
  return true;
}

bool inequality_holds_cond_s(const KoetheMatrix& b, const KoetheMatrix& a, std::size_t p,
                             std::size_t q, std::size_t k, std::size_t s, std::size_t l,
                             std::size_t r, double log_c, std::size_t truncation) {
  const double bound = log_c + std::log1p(kWitnessSlack);
  for (std::size_t n = 1; n <= truncation; ++n) {
    for (std::size_t m = 1; m <= truncation; ++m) {
      const double rhs = std::max(b.log_entry(q, m) - a.log_entry(p, n),
                                  b.log_entry(r, m) - a.log_entry(l, n));
      if (b.log_entry(s, m) - a.log_entry(k, n) > bound + rhs) return false;
    }
  }
  return true;
}

std::optional<std::size_t> assigned(const Branch& branch, std::string_view name) {
  for (const auto& [key, value] : branch.assignment) {
    if (key == name) return value;
  }
  return std::nullopt;
}

}  // namespace lkoethe
