#include "lkoethe/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lkoethe/errors.hpp"
#include "lkoethe/log_math.hpp"
#include "lkoethe/random.hpp"

namespace lkoethe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_levels(const KoetheMatrix& a, const KoetheMatrix& b, std::size_t p, std::size_t q) {
  if (p < 1 || p > b.levels()) {
    throw IndexError("range level p=" + std::to_string(p) + " outside 1.." +
                     std::to_string(b.levels()));
  }
  if (q < 1 || q > a.levels()) {
    throw IndexError("domain level q=" + std::to_string(q) + " outside 1.." +
                     std::to_string(a.levels()));
  }
}

}  // namespace

DenseOperator::DenseOperator(std::size_t domain_dim, std::size_t range_dim,
                             std::vector<double> theta)
    : domain_dim_(domain_dim), range_dim_(range_dim), theta_(std::move(theta)) {
  if (domain_dim_ == 0 || range_dim_ == 0) throw InvalidInput("dense operator needs nonzero dims");
  if (theta_.size() != domain_dim_ * range_dim_) {
    throw DimMismatch("dense operator: " + std::to_string(theta_.size()) +
                      " coefficients for a " + std::to_string(domain_dim_) + "x" +
                      std::to_string(range_dim_) + " grid");
  }
  for (double c : theta_) {
    if (!std::isfinite(c)) throw InvalidInput("dense operator: non-finite coefficient");
  }
}

RankOneOperator::RankOneOperator(std::size_t i_, std::size_t v_, double scale_)
    : i(i_), v(v_), scale(scale_) {
  if (i < 1 || v < 1) throw InvalidInput("rank-one operator indices are 1-based");
  if (!std::isfinite(scale)) throw InvalidInput("rank-one operator: non-finite scale");
}

QuasiDiagonalOperator::QuasiDiagonalOperator(std::vector<QuasiDiagonalEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& l, const auto& r) { return l.n < r.n; });
  std::set<std::size_t> targets;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (e.n < 1 || e.sigma < 1) throw InvalidInput("quasi-diagonal indices are 1-based");
    if (!std::isfinite(e.m)) throw InvalidInput("quasi-diagonal: non-finite multiplier");
    if (k > 0 && entries_[k - 1].n == e.n) {
      throw InvalidInput("quasi-diagonal: index n=" + std::to_string(e.n) + " listed twice");
    }
    if (!targets.insert(e.sigma).second) injective_ = false;
  }
}

QuasiDiagonalOperator QuasiDiagonalOperator::identity(std::size_t dims, double multiplier) {
  std::vector<QuasiDiagonalEntry> entries(dims);
  for (std::size_t n = 1; n <= dims; ++n) entries[n - 1] = {n, n, multiplier};
  return QuasiDiagonalOperator(std::move(entries));
}

const QuasiDiagonalEntry* QuasiDiagonalOperator::find(std::size_t n) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                                   [](const auto& e, std::size_t key) { return e.n < key; });
  return it != entries_.end() && it->n == n ? &*it : nullptr;
}

std::string kind_name(const OperatorRep& op) {
  return std::visit(Overloaded{
                        [](const DenseOperator&) { return "dense"; },
                        [](const RankOneOperator&) { return "rank_one"; },
                        [](const QuasiDiagonalOperator&) { return "quasi_diagonal"; },
                    },
                    op);
}

OperatorRep restrict_operator(const OperatorRep& op, std::size_t domain_dim,
                              std::size_t range_dim) {
  return std::visit(
      Overloaded{
          [&](const DenseOperator& d) -> OperatorRep {
            const std::size_t rows = std::min(domain_dim, d.domain_dim());
            const std::size_t cols = std::min(range_dim, d.range_dim());
            if (rows == d.domain_dim() && cols == d.range_dim()) return d;
            std::vector<double> theta(rows * cols);
            for (std::size_t n = 1; n <= rows; ++n) {
              for (std::size_t v = 1; v <= cols; ++v) theta[(n - 1) * cols + v - 1] = d.coeff(n, v);
            }
            return DenseOperator(rows, cols, std::move(theta));
          },
          [&](const RankOneOperator& r) -> OperatorRep {
            if (r.i > domain_dim || r.v > range_dim) return RankOneOperator(r.i, r.v, 0.0);
            return r;
          },
          [&](const QuasiDiagonalOperator& qd) -> OperatorRep {
            std::vector<QuasiDiagonalEntry> kept;
            for (const auto& e : qd.entries()) {
              if (e.n <= domain_dim && e.sigma <= range_dim) kept.push_back(e);
            }
            return QuasiDiagonalOperator(std::move(kept));
          },
      },
      op);
}

GradedVector apply(const OperatorRep& op, const GradedVector& x, std::size_t range_dim) {
  std::vector<double> y(range_dim, 0.0);
  std::visit(
      Overloaded{
          [&](const DenseOperator& d) {
            // A smaller grid acts as zero outside its block.
            if (d.domain_dim() > x.size() || d.range_dim() > range_dim) {
              throw DimMismatch("dense operator is " + std::to_string(d.domain_dim()) + "->" +
                                std::to_string(d.range_dim()) + ", applied " +
                                std::to_string(x.size()) + "->" + std::to_string(range_dim));
            }
            for (std::size_t n = 1; n <= d.domain_dim(); ++n) {
              const double xn = x[n - 1];
              if (xn == 0.0) continue;
              const auto col = d.image(n);
              for (std::size_t v = 0; v < col.size(); ++v) y[v] += col[v] * xn;
            }
          },
          [&](const RankOneOperator& r) {
            if (r.i > x.size() || r.v > range_dim) {
              throw DimMismatch("rank-one operator (i=" + std::to_string(r.i) +
                                ", v=" + std::to_string(r.v) + ") outside " +
                                std::to_string(x.size()) + "->" + std::to_string(range_dim));
            }
            y[r.v - 1] = r.scale * x[r.i - 1];
          },
          [&](const QuasiDiagonalOperator& qd) {
            for (const auto& e : qd.entries()) {
              if (e.n > x.size() || e.sigma > range_dim) {
                throw DimMismatch("quasi-diagonal entry (n=" + std::to_string(e.n) +
                                  ", sigma=" + std::to_string(e.sigma) + ") outside " +
                                  std::to_string(x.size()) + "->" + std::to_string(range_dim));
              }
              y[e.sigma - 1] += e.m * x[e.n - 1];
            }
          },
      },
      op);
  return GradedVector(std::move(y));
}

std::vector<std::size_t> image_support(const OperatorRep& op, std::size_t n) {
  std::vector<std::size_t> support;
  std::visit(Overloaded{
                 [&](const DenseOperator& d) {
                   if (n < 1 || n > d.domain_dim()) return;
                   const auto col = d.image(n);
                   for (std::size_t v = 0; v < col.size(); ++v) {
                     if (col[v] != 0.0) support.push_back(v + 1);
                   }
                 },
                 [&](const RankOneOperator& r) {
                   if (r.i == n && r.scale != 0.0) support.push_back(r.v);
                 },
                 [&](const QuasiDiagonalOperator& qd) {
                   if (const auto* e = qd.find(n); e && e->m != 0.0) support.push_back(e->sigma);
                 },
             },
             op);
  return support;
}

double log_image_seminorm(const OperatorRep& op, const KoetheMatrix& b, const NormSpec& norm,
                          std::size_t n, std::size_t k) {
  const auto row = b.log_row(k);
  return std::visit(
      Overloaded{
          [&](const DenseOperator& d) {
            if (n < 1 || n > d.domain_dim()) return kNegInf;
            const auto col = d.image(n);
            const std::size_t len = std::min(col.size(), row.size());
            return log_weighted_norm(norm, col.first(len), row);
          },
          [&](const RankOneOperator& r) {
            if (r.i != n || r.v > row.size()) return kNegInf;
            return log_abs(r.scale) + row[r.v - 1];
          },
          [&](const QuasiDiagonalOperator& qd) {
            const auto* e = qd.find(n);
            if (!e || e->sigma > row.size()) return kNegInf;
            return log_abs(e->m) + row[e->sigma - 1];
          },
      },
      op);
}

std::optional<double> log_opnorm_exact(const OperatorRep& op, const KoetheMatrix& a,
                                       const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                                       std::size_t q) {
  check_levels(a, b, p, q);
  return std::visit(
      Overloaded{
          [&](const DenseOperator&) -> std::optional<double> { return std::nullopt; },
          [&](const RankOneOperator& r) -> std::optional<double> {
            if (r.i > a.dims() || r.v > b.dims() || r.scale == 0.0) return kNegInf;
            return log_abs(r.scale) + b.log_entry(p, r.v) - a.log_entry(q, r.i);
          },
          [&](const QuasiDiagonalOperator& qd) -> std::optional<double> {
            if (!qd.injective() || !norm.symmetric()) return std::nullopt;
            double best = kNegInf;
            const auto brow = b.log_row(p);
            const auto arow = a.log_row(q);
            for (const auto& e : qd.entries()) {
              if (e.n > a.dims() || e.sigma > b.dims() || e.m == 0.0) continue;
              best = std::max(best, log_abs(e.m) + brow[e.sigma - 1] - arow[e.n - 1]);
            }
            return best;
          },
      },
      op);
}

std::optional<double> opnorm_exact(const OperatorRep& op, const KoetheMatrix& a,
                                   const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                                   std::size_t q) {
  const auto log_value = log_opnorm_exact(op, a, b, norm, p, q);
  if (!log_value) return std::nullopt;
  return std::exp(*log_value);
}

double log_opnorm_upper_bound(const OperatorRep& op, const KoetheMatrix& a,
                              const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                              std::size_t q) {
  if (const auto exact = log_opnorm_exact(op, a, b, norm, p, q)) return *exact;
  // ||Tx||_p <= sum_n |x_n| a_n^q (||T e_n||_p / a_n^q) and |x_n| a_n^q <= ||x||_q
  // by monotonicity with ||e_n|| = 1. For l_1 the column sup is already exact.
  const auto restricted = restrict_operator(op, a.dims(), b.dims());
  const auto arow = a.log_row(q);
  std::vector<double> ratios;
  ratios.reserve(a.dims());
  for (std::size_t n = 1; n <= a.dims(); ++n) {
    const double image = log_image_seminorm(restricted, b, norm, n, p);
    if (image != kNegInf) ratios.push_back(image - arow[n - 1]);
  }
  if (ratios.empty()) return kNegInf;
  if (norm.kind() == NormSpec::Kind::kLp && norm.p() == 1.0) {
    return *std::max_element(ratios.begin(), ratios.end());
  }
  return log_sum_exp(ratios);
}

double log_opnorm_oracle(const OperatorRep& op, const KoetheMatrix& a, const KoetheMatrix& b,
                         const NormSpec& norm, std::size_t p, std::size_t q, std::size_t budget,
                         std::uint64_t seed) {
  check_levels(a, b, p, q);
  if (a.dims() > kOracleDimCap) throw CapExceeded("opnorm_oracle domain", a.dims(), kOracleDimCap);
  if (b.dims() > kOracleDimCap) throw CapExceeded("opnorm_oracle range", b.dims(), kOracleDimCap);

  const std::size_t da = a.dims();
  const std::size_t db = b.dims();
  const auto restricted = restrict_operator(op, da, db);
  const auto arow = a.log_row(q);
  const auto brow = b.log_row(p);

  auto ratio = [&](const std::vector<double>& x) {
    const double den = log_weighted_norm(norm, x, arow);
    if (den == kNegInf) return kNegInf;
    const auto y = apply(restricted, GradedVector(x), db);
    return log_weighted_norm(norm, y.coeffs(), brow) - den;
  };

  // Coordinates scaled so that each carries unit weight at level q.
  std::vector<double> unit(da);
  for (std::size_t n = 0; n < da; ++n) unit[n] = std::exp(-arow[n]);

  double best = kNegInf;
  std::vector<double> x(da, 0.0);
  for (std::size_t n = 0; n < da; ++n) {
    x[n] = unit[n];
    best = std::max(best, ratio(x));
    x[n] = 0.0;
  }
  for (std::size_t n1 = 0; n1 < da; ++n1) {
    for (std::size_t n2 = n1 + 1; n2 < da; ++n2) {
      for (double sign : {1.0, -1.0}) {
        x[n1] = unit[n1];
        x[n2] = sign * unit[n2];
        best = std::max(best, ratio(x));
        x[n1] = 0.0;
        x[n2] = 0.0;
      }
    }
  }

  // The ratio is scale-invariant, so x is pulled back to the unit ball after
  // every sweep; otherwise a direction of asymptotic growth never stops
  // "improving".
  auto renormalize = [&] {
    const double log_norm = log_weighted_norm(norm, x, arow);
    if (log_norm == kNegInf) return;
    const double s = std::exp(-log_norm);
    for (double& v : x) v *= s;
  };

  Rng rng(seed);
  constexpr int kStepHalvings = 6;
  constexpr int kMaxSweeps = 64;
  constexpr double kMinGain = 1e-13;
  for (std::size_t trial = 0; trial < budget; ++trial) {
    for (std::size_t n = 0; n < da; ++n) x[n] = rng.uniform(-1.0, 1.0) * unit[n];
    renormalize();
    double current = ratio(x);
    double step = 0.5;
    for (int h = 0; h < kStepHalvings; ++h, step *= 0.5) {
      bool improved = true;
      for (int sweep = 0; improved && sweep < kMaxSweeps; ++sweep) {
        improved = false;
        for (std::size_t n = 0; n < da; ++n) {
          for (double dir : {1.0, -1.0}) {
            const double saved = x[n];
            x[n] = saved + dir * step * unit[n];
            const double candidate = ratio(x);
            if (candidate > current + kMinGain) {
              current = candidate;
              improved = true;
            } else {
              x[n] = saved;
            }
          }
        }
        renormalize();
      }
    }
    best = std::max(best, current);
  }
  return best;
}

double opnorm_oracle(const OperatorRep& op, const KoetheMatrix& a, const KoetheMatrix& b,
                     const NormSpec& norm, std::size_t p, std::size_t q, std::size_t budget,
                     std::uint64_t seed) {
  return std::exp(log_opnorm_oracle(op, a, b, norm, p, q, budget, seed));
}

ContinuityCertificate continuity_certificate(const OperatorRep& op, const KoetheMatrix& a,
                                             const KoetheMatrix& b, const NormSpec& norm,
                                             const ContinuityOptions& options) {
  const std::size_t levels = options.levels == 0 ? b.levels() : options.levels;
  if (levels > b.levels()) {
    throw IndexError("continuity certificate: " + std::to_string(levels) +
                     " levels requested, range matrix has " + std::to_string(b.levels()));
  }
  const std::size_t cap = options.max_domain_level == 0
                              ? a.levels()
                              : std::min(options.max_domain_level, a.levels());

  std::vector<std::size_t> ladder = options.ladder;
  if (ladder.empty()) {
    const std::size_t d = a.dims();
    for (std::size_t rung : {(d + 3) / 4, (d + 1) / 2, d}) {
      if (ladder.empty() || rung > ladder.back()) ladder.push_back(rung);
    }
  }
  validate_ladder(ladder);

  std::vector<KoetheMatrix> a_rungs;
  std::vector<KoetheMatrix> b_rungs;
  for (std::size_t rung : ladder) {
    a_rungs.push_back(a.truncate(a.levels(), std::min(rung, a.dims())));
    b_rungs.push_back(b.truncate(b.levels(), std::min(rung, b.dims())));
  }

  const double guard = std::log(kBlowUpGuard);
  ContinuityCertificate cert;
  std::size_t floor_level = 1;
  for (std::size_t k = 1; k <= levels; ++k) {
    std::optional<std::size_t> chosen;
    for (std::size_t n_level = 1; n_level <= cap && !chosen; ++n_level) {
      std::vector<double> values;
      for (std::size_t r = 0; r < ladder.size(); ++r) {
        values.push_back(log_opnorm_upper_bound(op, a_rungs[r], b_rungs[r], norm, k, n_level));
      }
      const double last = values.back();
      if (!(last < guard)) continue;
      if (classify_ladder(values, options.divergence_ratio) == LadderTrend::kDivergent) continue;
      chosen = n_level;
    }
    if (!chosen) throw ContinuityFailure(k);
    floor_level = std::max(floor_level, *chosen);
    cert.rows.push_back(
        {k, floor_level, log_opnorm_upper_bound(op, a, b, norm, k, floor_level)});
  }
  return cert;
}

BoundednessDiagnostic boundedness_diagnostic(const OperatorRep& op, const KoetheMatrix& a,
                                             const KoetheMatrix& b, const NormSpec& norm,
                                             std::size_t domain_level, std::size_t max_range_level,
                                             std::span<const std::size_t> ladder,
                                             const BoundednessOptions& options) {
  validate_ladder(ladder);
  check_levels(a, b, max_range_level, domain_level);
  if (ladder.back() > a.dims() || ladder.back() > b.dims()) {
    throw BudgetTooLargeForTruncation("ladder rung " + std::to_string(ladder.back()) +
                                      " exceeds matrix dimensions");
  }
  BoundednessDiagnostic diag;
  diag.domain_level = domain_level;
  diag.ladder.assign(ladder.begin(), ladder.end());
  for (std::size_t r = 1; r <= max_range_level; ++r) {
    std::vector<double> values;
    bool all_exact = true;
    for (std::size_t rung : ladder) {
      const auto at = a.truncate(a.levels(), rung);
      const auto bt = b.truncate(b.levels(), rung);
      if (const auto exact = log_opnorm_exact(op, at, bt, norm, r, domain_level)) {
        values.push_back(*exact);
      } else {
        all_exact = false;
        values.push_back(log_opnorm_oracle(op, at, bt, norm, r, domain_level,
                                           options.oracle_budget, options.seed));
      }
    }
    diag.divergent.push_back(classify_ladder(values, options.divergence_ratio) ==
                             LadderTrend::kDivergent);
    diag.exact.push_back(all_exact);
    diag.log_values.push_back(std::move(values));
  }
  return diag;
}

}  // namespace lkoethe
