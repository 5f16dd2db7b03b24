#pragma once

// Extraction of a continuous unbounded quasi-diagonal operator D from a
// continuous unbounded operator T, on truncated l-Köthe spaces:
//
//   1. regrade the domain so that ||Tx||_k <= 2^{-k} ||x||_k;
//   2. cycle k_j through 1..K_cycle and pick increasing n_j with
//      ||T e_{n_j}||_{k_j+1} / ||e_{n_j}||_{k_j} >= 2^j;
//   3. pick v_j in the support of T e_{n_j} with
//      t_j := sup_k b_{v_j}^k / a_{n_j}^k <= 2^{-j} b_{v_j}^{k_j+1} / a_{n_j}^{k_j};
//   4. D e_{n_j} = t_j^{-1} e~_{v_j}, zero elsewhere.
//
// Plus the rank-one probe e_i' ⊗ e~_v and a greedy search for a common basic
// subspace carried by a quasi-diagonal map.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lkoethe/koethe.hpp"
#include "lkoethe/operators.hpp"
#include "lkoethe/seqnorm.hpp"

namespace lkoethe {

// Absolute tolerance for log-domain comparisons against thresholds that the
// construction can meet with equality.
inline constexpr double kLogCompareTolerance = 1e-12;

struct RegradeResult {
  // log ã_n^k = k log 2 + log M_k + log a_n^{N(k)}, k = 1..K.
  KoetheMatrix regraded;
  ContinuityCertificate certificate;
  // log M_k actually used: zero levels replaced by 1, then running max.
  std::vector<double> log_multipliers;
};

// Throws InvalidCertificate when a recomputed bound on ||T||_{k,N(k)}
// exceeds M_k (1 + 1e-12) or the certificate is malformed.
RegradeResult regrade_wlog(const KoetheMatrix& a, const OperatorRep& op, const KoetheMatrix& b,
                           const NormSpec& norm, const ContinuityCertificate& cert);

struct ExtractOptions {
  std::size_t k_cycle = 2;
  std::size_t selections = 8;  // J
  // Explicit k_j sequence (length >= J); empty means round-robin over
  // 1..k_cycle.
  std::vector<std::size_t> k_sequence;
};

struct Selection {
  std::size_t j;
  std::size_t k_j;
  std::size_t n_j;
  std::size_t v_j;
  double log_t;        // log t_j
  double log_ratio_t;  // log ||T e_{n_j}||_{k_j+1} - log ||e_{n_j}||_{k_j}
  double log_ratio_d;  // log ||D e_{n_j}||_{k_j+1} - log ||e_{n_j}||_{k_j}
};

struct ExtractionCertificate {
  std::size_t levels = 0;  // K: the sup defining t_j runs over k <= K
  std::size_t k_cycle = 0;
  std::vector<Selection> selections;
  QuasiDiagonalOperator d{std::vector<QuasiDiagonalEntry>{}};
};

// D from the selections: D e_{n_j} = exp(-log t_j) e~_{v_j}.
QuasiDiagonalOperator operator_from_selections(const std::vector<Selection>& selections);

// `a_regraded` is the domain grading in which ||Tx||_k <= 2^{-k} ||x||_k.
// Throws SelectionNotFound (NjNotFound / VjNotFound) naming the first j the
// truncation cannot realize.
ExtractionCertificate extract_quasidiagonal(const OperatorRep& op, const KoetheMatrix& a_regraded,
                                            const KoetheMatrix& b, const NormSpec& norm,
                                            const ExtractOptions& options);

struct ClauseResult {
  bool passed = true;
  std::vector<std::string> failures;
};

struct VerificationReport {
  ClauseResult coordinate;  // t_j^{-1} b_{v_j}^k <= ã_{n_j}^k for all j, k
  ClauseResult sampled;     // ||Dx||_k <= ||x||_k (1 + 1e-9) on random x
  ClauseResult ratios;      // ||D e_{n_j}||_{k_j+1} / ||e_{n_j}||_{k_j} >= 2^j

  bool passed() const { return coordinate.passed && sampled.passed && ratios.passed; }
};

VerificationReport verify_extraction(const ExtractionCertificate& cert,
                                     const KoetheMatrix& a_regraded, const KoetheMatrix& b,
                                     const NormSpec& norm, std::size_t samples,
                                     std::uint64_t seed);

// T = e_i' ⊗ e~_v.
RankOneOperator rank_one_probe(std::size_t i, std::size_t v);

inline constexpr double kDefaultCbsMaxLogC = 13.815510557964274;  // log 1e6

struct CbsRow {
  std::size_t level;     // k
  std::size_t partner;   // k'
  double log_c;
};

struct CbsResult {
  bool found = false;
  std::vector<std::size_t> subset;  // J, ascending
  // a_n^k <= C |m_n| b_{sigma(n)}^{k'} on J
  std::vector<CbsRow> lower;
  // |m_n| b_{sigma(n)}^k <= C a_n^{k'} on J
  std::vector<CbsRow> upper;
};

struct CbsOptions {
  std::size_t levels = 0;  // K; 0 means min(A.levels, B.levels)
  std::size_t min_size = 8;
  double max_log_c = kDefaultCbsMaxLogC;
};

// Greedy scan of D's support in increasing n: an index joins J when every
// level k still has some k' keeping both two-sided constants below
// exp(max_log_c). Each table row reports the least k' whose constant does not
// grow along J. `found` is false (inconclusive) when |J| < min_size or some
// level has no such k'.
CbsResult cbs_search(const QuasiDiagonalOperator& d, const KoetheMatrix& a, const KoetheMatrix& b,
                     const CbsOptions& options = {});

}  // namespace lkoethe
