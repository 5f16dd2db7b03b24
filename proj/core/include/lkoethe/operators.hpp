#pragma once

// Continuous linear operators between truncated l-Köthe spaces and their
// operator seminorms ||T||_{p,q} = sup{ ||Tx||_p : ||x||_q <= 1 }.
// Domain matrix A (indices n, i), range matrix B (indices v). All norms are
// handled as log-values; linear wrappers exponentiate at the end.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lkoethe/koethe.hpp"
#include "lkoethe/ladder.hpp"
#include "lkoethe/seqnorm.hpp"

namespace lkoethe {

// T e_n = sum_v theta(n, v) e~_v for n <= domain_dim, v <= range_dim.
class DenseOperator {
 public:
  DenseOperator(std::size_t domain_dim, std::size_t range_dim, std::vector<double> theta);

  std::size_t domain_dim() const noexcept { return domain_dim_; }
  std::size_t range_dim() const noexcept { return range_dim_; }
  double coeff(std::size_t n, std::size_t v) const { return theta_[(n - 1) * range_dim_ + v - 1]; }
  // Coefficients of T e_n.
  std::span<const double> image(std::size_t n) const {
    return std::span<const double>(theta_).subspan((n - 1) * range_dim_, range_dim_);
  }
  std::span<const double> theta() const noexcept { return theta_; }

 private:
  std::size_t domain_dim_;
  std::size_t range_dim_;
  std::vector<double> theta_;
};

// T = scale * (e_i' ⊗ e~_v).
struct RankOneOperator {
  RankOneOperator(std::size_t i, std::size_t v, double scale);

  std::size_t i;
  std::size_t v;
  double scale;
};

struct QuasiDiagonalEntry {
  std::size_t n;
  std::size_t sigma;
  double m;
};

// T e_n = m_n e~_{sigma(n)} on the listed support, zero elsewhere.
class QuasiDiagonalOperator {
 public:
  explicit QuasiDiagonalOperator(std::vector<QuasiDiagonalEntry> entries);
  static QuasiDiagonalOperator identity(std::size_t dims, double multiplier = 1.0);

  // Sorted by n.
  std::span<const QuasiDiagonalEntry> entries() const noexcept { return entries_; }
  bool injective() const noexcept { return injective_; }
  const QuasiDiagonalEntry* find(std::size_t n) const;

 private:
  std::vector<QuasiDiagonalEntry> entries_;
  bool injective_ = true;
};

using OperatorRep = std::variant<DenseOperator, RankOneOperator, QuasiDiagonalOperator>;

std::string kind_name(const OperatorRep& op);

// P_B T P_A: drops every coefficient with n > domain_dim or v > range_dim.
OperatorRep restrict_operator(const OperatorRep& op, std::size_t domain_dim, std::size_t range_dim);

// y = T x with len(y) = range_dim. Throws DimMismatch when T refers to a
// coordinate outside x or outside the range.
GradedVector apply(const OperatorRep& op, const GradedVector& x, std::size_t range_dim);

// Range indices v with a nonzero coefficient in T e_n (ascending).
std::vector<std::size_t> image_support(const OperatorRep& op, std::size_t n);

// log ||T e_n||_k in B.
double log_image_seminorm(const OperatorRep& op, const KoetheMatrix& b, const NormSpec& norm,
                          std::size_t n, std::size_t k);

// Closed forms: rank-one |scale| b_v^p / a_i^q (any norm), quasi-diagonal with
// injective sigma under l_p / c_0: sup_n |m_n| b_{sigma(n)}^p / a_n^q.
// std::nullopt for dense operators and non-injective sigma.
std::optional<double> log_opnorm_exact(const OperatorRep& op, const KoetheMatrix& a,
                                       const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                                       std::size_t q);
std::optional<double> opnorm_exact(const OperatorRep& op, const KoetheMatrix& a,
                                   const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                                   std::size_t q);

// A value guaranteed to be >= ||T||_{p,q}: the exact form when available, the
// column sup for l_1 (exact there), otherwise sum_n ||T e_n||_p / a_n^q.
double log_opnorm_upper_bound(const OperatorRep& op, const KoetheMatrix& a,
                              const KoetheMatrix& b, const NormSpec& norm, std::size_t p,
                              std::size_t q);

inline constexpr std::size_t kOracleDimCap = 10;

// Lower bound on ||T||_{p,q}: best ratio over basis directions, signed
// two-coordinate supports and `budget` random starts refined by coordinate
// ascent. Deterministic for a fixed seed.
double log_opnorm_oracle(const OperatorRep& op, const KoetheMatrix& a, const KoetheMatrix& b,
                         const NormSpec& norm, std::size_t p, std::size_t q, std::size_t budget,
                         std::uint64_t seed);
double opnorm_oracle(const OperatorRep& op, const KoetheMatrix& a, const KoetheMatrix& b,
                     const NormSpec& norm, std::size_t p, std::size_t q, std::size_t budget,
                     std::uint64_t seed);

struct ContinuityRow {
  std::size_t level;         // k
  std::size_t domain_level;  // N(k)
  double log_bound;          // log M_k, M_k >= ||T||_{k,N(k)}
};

struct ContinuityCertificate {
  std::vector<ContinuityRow> rows;  // k = 1..K
};

struct ContinuityOptions {
  std::size_t levels = 0;            // K; 0 means every level of B
  std::size_t max_domain_level = 0;  // search cap on N(k); 0 means every level of A
  // Index truncations used to reject N(k) whose bound diverges with the
  // truncation. Empty selects {d/4, d/2, d} for the domain dimension d.
  std::vector<std::size_t> ladder;
  double divergence_ratio = kDefaultDivergenceRatio;
};

// For each k picks the least N(k) whose certified bound stays below the
// blow-up guard and does not diverge over the ladder; N(k) is then made
// nondecreasing and M_k recomputed at full truncation. Throws
// ContinuityFailure(k).
ContinuityCertificate continuity_certificate(const OperatorRep& op, const KoetheMatrix& a,
                                             const KoetheMatrix& b, const NormSpec& norm,
                                             const ContinuityOptions& options = {});

struct BoundednessDiagnostic {
  std::size_t domain_level = 0;  // N
  std::vector<std::size_t> ladder;
  std::vector<std::vector<double>> log_values;  // [r-1][rung]
  std::vector<bool> divergent;                  // [r-1]
  std::vector<bool> exact;                      // [r-1]: closed form used on every rung
};

struct BoundednessOptions {
  double divergence_ratio = kDefaultDivergenceRatio;
  std::size_t oracle_budget = 200;
  std::uint64_t seed = 1;
};

BoundednessDiagnostic boundedness_diagnostic(const OperatorRep& op, const KoetheMatrix& a,
                                             const KoetheMatrix& b, const NormSpec& norm,
                                             std::size_t domain_level, std::size_t max_range_level,
                                             std::span<const std::size_t> ladder,
                                             const BoundednessOptions& options = {});

}  // namespace lkoethe
