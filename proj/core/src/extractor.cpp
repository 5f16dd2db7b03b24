#include "lkoethe/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "lkoethe/errors.hpp"
#include "lkoethe/log_math.hpp"
#include "lkoethe/random.hpp"

namespace lkoethe {

namespace {

constexpr double kSampledSlack = 1e-9;

std::size_t level_for(const ExtractOptions& options, std::size_t j) {
  if (!options.k_sequence.empty()) return options.k_sequence[j - 1];
  return (j - 1) % options.k_cycle + 1;
}

// log of |sum_j sign_j exp(log_j)| with max-rescaling.
double log_abs_signed_sum(const std::vector<std::pair<double, double>>& terms) {
  double m = kNegInf;
  for (const auto& [sign, log_mag] : terms) m = std::max(m, log_mag);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (const auto& [sign, log_mag] : terms) sum += sign * std::exp(log_mag - m);
  return log_abs(sum) + m;
}

}  // namespace

RegradeResult regrade_wlog(const KoetheMatrix& a, const OperatorRep& op, const KoetheMatrix& b,
                           const NormSpec& norm, const ContinuityCertificate& cert) {
  if (cert.rows.empty()) throw InvalidCertificate("continuity certificate has no rows");
  std::vector<double> log_m;
  std::size_t previous_level = 0;
  for (std::size_t idx = 0; idx < cert.rows.size(); ++idx) {
    const auto& row = cert.rows[idx];
    if (row.level != idx + 1) {
      throw InvalidCertificate("certificate rows must list k = 1, 2, ... in order");
    }
    if (row.domain_level < 1 || row.domain_level > a.levels()) {
      throw InvalidCertificate("N(" + std::to_string(row.level) + ") = " +
                               std::to_string(row.domain_level) + " outside the domain levels");
    }
    if (row.level > b.levels()) {
      throw InvalidCertificate("level k=" + std::to_string(row.level) +
                               " outside the range levels");
    }
    if (row.domain_level < previous_level) {
      throw InvalidCertificate("N(k) must be nondecreasing");
    }
    previous_level = row.domain_level;
    if (std::isnan(row.log_bound)) throw InvalidCertificate("M_k is NaN");

    const double recomputed = log_opnorm_upper_bound(op, a, b, norm, row.level, row.domain_level);
    if (recomputed > row.log_bound + std::log1p(1e-12)) {
      throw InvalidCertificate("recomputed ||T||_{" + std::to_string(row.level) + "," +
                               std::to_string(row.domain_level) + "} exceeds the certified M_k");
    }
    const double used = row.log_bound == kNegInf ? 0.0 : row.log_bound;
    log_m.push_back(log_m.empty() ? used : std::max(log_m.back(), used));
  }

  const std::size_t levels = cert.rows.size();
  const std::size_t dims = a.dims();
  ExplicitGrid grid{levels, dims, std::vector<double>(levels * dims)};
  for (std::size_t k = 1; k <= levels; ++k) {
    const auto source = a.log_row(cert.rows[k - 1].domain_level);
    const double shift = static_cast<double>(k) * std::numbers::ln2 + log_m[k - 1];
    for (std::size_t n = 0; n < dims; ++n) grid.log_entries[(k - 1) * dims + n] = shift + source[n];
  }
  KoetheMatrixSpec spec{std::move(grid), levels, dims};
  return RegradeResult{KoetheMatrix::build(spec), cert, std::move(log_m)};
}

QuasiDiagonalOperator operator_from_selections(const std::vector<Selection>& selections) {
  std::vector<QuasiDiagonalEntry> entries;
  entries.reserve(selections.size());
  for (const auto& s : selections) entries.push_back({s.n_j, s.v_j, std::exp(-s.log_t)});
  return QuasiDiagonalOperator(std::move(entries));
}

ExtractionCertificate extract_quasidiagonal(const OperatorRep& op, const KoetheMatrix& a_regraded,
                                            const KoetheMatrix& b, const NormSpec& norm,
                                            const ExtractOptions& options) {
  const std::size_t levels = std::min(a_regraded.levels(), b.levels());
  if (options.k_sequence.empty()) {
    if (options.k_cycle < 1 || options.k_cycle + 1 > levels) {
      throw InvalidInput("k_cycle must lie in 1.." + std::to_string(levels - 1) +
                         " (levels - 1)");
    }
  } else {
    if (options.k_sequence.size() < options.selections) {
      throw InvalidInput("explicit k_j sequence is shorter than the number of selections");
    }
    for (std::size_t k : options.k_sequence) {
      if (k < 1 || k + 1 > levels) throw InvalidInput("k_j sequence entry outside 1..levels-1");
    }
  }

  const auto restricted = restrict_operator(op, a_regraded.dims(), b.dims());
  ExtractionCertificate cert;
  cert.levels = levels;
  cert.k_cycle = options.k_sequence.empty()
                     ? options.k_cycle
                     : *std::max_element(options.k_sequence.begin(), options.k_sequence.end());

  std::size_t previous_n = 0;
  for (std::size_t j = 1; j <= options.selections; ++j) {
    const std::size_t k = level_for(options, j);
    const double threshold = static_cast<double>(j) * std::numbers::ln2;
    const auto a_k = a_regraded.log_row(k);

    std::size_t n_j = 0;
    double ratio_t = kNegInf;
    for (std::size_t n = previous_n + 1; n <= a_regraded.dims(); ++n) {
      const double ratio = log_image_seminorm(restricted, b, norm, n, k + 1) - a_k[n - 1];
      if (ratio >= threshold - kLogCompareTolerance) {
        n_j = n;
        ratio_t = ratio;
        break;
      }
    }
    if (n_j == 0) throw SelectionNotFound(SelectionNotFound::Stage::kDomainIndex, j);

    std::size_t v_j = 0;
    double log_t = kNegInf;
    for (std::size_t v : image_support(restricted, n_j)) {
      double sup = kNegInf;
      for (std::size_t kk = 1; kk <= levels; ++kk) {
        sup = std::max(sup, b.log_entry(kk, v) - a_regraded.log_entry(kk, n_j));
      }
      const double bound = -threshold + b.log_entry(k + 1, v) - a_k[n_j - 1];
      if (sup <= bound + kLogCompareTolerance) {
        v_j = v;
        log_t = sup;
        break;
      }
    }
    if (v_j == 0) throw SelectionNotFound(SelectionNotFound::Stage::kRangeIndex, j);

    const double ratio_d = -log_t + b.log_entry(k + 1, v_j) - a_k[n_j - 1];
    cert.selections.push_back({j, k, n_j, v_j, log_t, ratio_t, ratio_d});
    previous_n = n_j;
  }
  cert.d = operator_from_selections(cert.selections);
  return cert;
}

VerificationReport verify_extraction(const ExtractionCertificate& cert,
                                     const KoetheMatrix& a_regraded, const KoetheMatrix& b,
                                     const NormSpec& norm, std::size_t samples,
                                     std::uint64_t seed) {
  VerificationReport report;
  const std::size_t levels = cert.levels;
  if (levels > a_regraded.levels() || levels > b.levels()) {
    report.coordinate.passed = false;
    report.coordinate.failures.push_back("certificate levels exceed the matrices");
    return report;
  }

  // (a) coordinate continuity.
  for (const auto& s : cert.selections) {
    for (std::size_t k = 1; k <= levels; ++k) {
      const double excess = -s.log_t + b.log_entry(k, s.v_j) - a_regraded.log_entry(k, s.n_j);
      if (excess > kLogCompareTolerance) {
        report.coordinate.passed = false;
        report.coordinate.failures.push_back("j=" + std::to_string(s.j) +
                                             ", k=" + std::to_string(k));
      }
    }
  }

  // (b) sampled continuity, in log-domain. Half the samples live on the
  // support of D only, which is where the inequality is tight.
  Rng rng(seed);
  const std::size_t dims = a_regraded.dims();
  std::vector<double> log_x(dims);
  std::vector<double> sign_x(dims);
  for (std::size_t t = 0; t < samples && report.sampled.passed; ++t) {
    const std::size_t scale_level = rng.index(1, levels);
    const auto scale_row = a_regraded.log_row(scale_level);
    const bool support_only = (t % 2) == 0;
    std::fill(log_x.begin(), log_x.end(), kNegInf);
    std::fill(sign_x.begin(), sign_x.end(), 0.0);
    auto draw = [&](std::size_t n) {
      const double u = rng.uniform(-1.0, 1.0);
      log_x[n - 1] = log_abs(u) - scale_row[n - 1];
      sign_x[n - 1] = u < 0.0 ? -1.0 : 1.0;
    };
    if (support_only) {
      for (const auto& s : cert.selections) {
        if (s.n_j <= dims) draw(s.n_j);
      }
    } else {
      for (std::size_t n = 1; n <= dims; ++n) draw(n);
    }

    std::map<std::size_t, std::vector<std::pair<double, double>>> image;
    for (const auto& e : cert.d.entries()) {
      if (e.n > dims || e.sigma > b.dims() || log_x[e.n - 1] == kNegInf || e.m == 0.0) continue;
      const double sign = sign_x[e.n - 1] * (e.m < 0.0 ? -1.0 : 1.0);
      image[e.sigma].emplace_back(sign, log_x[e.n - 1] + log_abs(e.m));
    }

    for (std::size_t k = 1; k <= levels && report.sampled.passed; ++k) {
      const auto a_row = a_regraded.log_row(k);
      const auto b_row = b.log_row(k);
      std::vector<double> x_weighted(dims);
      for (std::size_t n = 0; n < dims; ++n) x_weighted[n] = log_x[n] + a_row[n];
      std::vector<double> y_weighted(b.dims(), kNegInf);
      for (const auto& [v, terms] : image) {
        y_weighted[v - 1] = log_abs_signed_sum(terms) + b_row[v - 1];
      }
      const double lhs = log_norm_from_logs(norm, y_weighted);
      const double rhs = log_norm_from_logs(norm, x_weighted);
      if (lhs > rhs + std::log1p(kSampledSlack)) {
        report.sampled.passed = false;
        report.sampled.failures.push_back("sample " + std::to_string(t) +
                                          ", k=" + std::to_string(k));
      }
    }
  }

  // (c) unboundedness ratios, recomputed from D itself.
  const auto expected = operator_from_selections(cert.selections);
  if (expected.entries().size() != cert.d.entries().size()) {
    report.ratios.passed = false;
    report.ratios.failures.push_back("operator D does not match the selections");
  }
  for (const auto& s : cert.selections) {
    if (s.k_j + 1 > levels) {
      report.ratios.passed = false;
      report.ratios.failures.push_back("j=" + std::to_string(s.j) + ": k_j+1 exceeds levels");
      continue;
    }
    const auto* entry = cert.d.find(s.n_j);
    if (!entry || entry->sigma != s.v_j) {
      report.ratios.passed = false;
      report.ratios.failures.push_back("j=" + std::to_string(s.j) + ": D e_{n_j} is not on v_j");
      continue;
    }
    const double ratio = log_image_seminorm(cert.d, b, norm, s.n_j, s.k_j + 1) -
                         a_regraded.log_entry(s.k_j, s.n_j);
    const double threshold = static_cast<double>(s.j) * std::numbers::ln2;
    if (ratio < threshold - kLogCompareTolerance) {
      report.ratios.passed = false;
      report.ratios.failures.push_back("j=" + std::to_string(s.j) + ": ratio below 2^j");
    } else if (std::fabs(ratio - s.log_ratio_d) > 1e-9 * (1.0 + std::fabs(ratio))) {
      report.ratios.passed = false;
      report.ratios.failures.push_back("j=" + std::to_string(s.j) +
                                       ": reported ratio does not recompute");
    }
  }
  for (std::size_t k = 1; k <= cert.k_cycle; ++k) {
    const bool scheduled = std::any_of(cert.selections.begin(), cert.selections.end(),
                                       [&](const Selection& s) { return s.k_j == k; });
    if (!scheduled && cert.selections.size() >= cert.k_cycle) {
      report.ratios.passed = false;
      report.ratios.failures.push_back("level k=" + std::to_string(k) + " never selected");
    }
  }
  return report;
}

RankOneOperator rank_one_probe(std::size_t i, std::size_t v) { return RankOneOperator(i, v, 1.0); }

CbsResult cbs_search(const QuasiDiagonalOperator& d, const KoetheMatrix& a, const KoetheMatrix& b,
                     const CbsOptions& options) {
  if (!d.injective()) throw InvalidInput("cbs_search needs sigma injective on the support");
  const std::size_t levels =
      options.levels == 0 ? std::min(a.levels(), b.levels()) : options.levels;
  if (levels < 1 || levels > a.levels() || levels > b.levels()) {
    throw IndexError("cbs_search: levels " + std::to_string(levels) + " out of range");
  }

  // worst[k][k'] over the current subset, per direction.
  std::vector<double> lower(levels * levels, kNegInf);
  std::vector<double> upper(levels * levels, kNegInf);
  auto fits = [&](const std::vector<double>& worst, const std::vector<double>& candidate) {
    for (std::size_t k = 0; k < levels; ++k) {
      bool some_partner = false;
      for (std::size_t kp = 0; kp < levels && !some_partner; ++kp) {
        const double c = std::max(worst[k * levels + kp], candidate[k * levels + kp]);
        some_partner = c <= options.max_log_c;
      }
      if (!some_partner) return false;
    }
    return true;
  };

  CbsResult result;
  std::vector<std::vector<double>> kept_lower, kept_upper;
  std::vector<double> cand_lower(levels * levels);
  std::vector<double> cand_upper(levels * levels);
  for (const auto& e : d.entries()) {
    if (e.n > a.dims() || e.sigma > b.dims() || e.m == 0.0) continue;
    const double log_m = log_abs(e.m);
    for (std::size_t k = 1; k <= levels; ++k) {
      for (std::size_t kp = 1; kp <= levels; ++kp) {
        const std::size_t slot = (k - 1) * levels + kp - 1;
        cand_lower[slot] = a.log_entry(k, e.n) - log_m - b.log_entry(kp, e.sigma);
        cand_upper[slot] = log_m + b.log_entry(k, e.sigma) - a.log_entry(kp, e.n);
      }
    }
    if (!fits(lower, cand_lower) || !fits(upper, cand_upper)) continue;
    for (std::size_t slot = 0; slot < lower.size(); ++slot) {
      lower[slot] = std::max(lower[slot], cand_lower[slot]);
      upper[slot] = std::max(upper[slot], cand_upper[slot]);
    }
    kept_lower.push_back(cand_lower);
    kept_upper.push_back(cand_upper);
    result.subset.push_back(e.n);
  }

  // For each k, the least k' whose constant has stopped growing along J: the
  // sup over J is already reached on its first half. A constant still
  // growing at the end of the truncation is not evidence of a uniform C.
  bool complete = true;
  auto table = [&](const std::vector<std::vector<double>>& kept) {
    std::vector<CbsRow> rows;
    const std::size_t half = (kept.size() + 1) / 2;
    for (std::size_t k = 1; k <= levels; ++k) {
      bool stable_found = false;
      for (std::size_t kp = 1; kp <= levels && !stable_found; ++kp) {
        const std::size_t slot = (k - 1) * levels + kp - 1;
        double first = kNegInf;
        double second = kNegInf;
        for (std::size_t idx = 0; idx < kept.size(); ++idx) {
          double& side = idx < half ? first : second;
          side = std::max(side, kept[idx][slot]);
        }
        if (second <= first + kLogCompareTolerance) {
          rows.push_back({k, kp, std::max(first, second)});
          stable_found = true;
        }
      }
      if (!stable_found) complete = false;
    }
    return rows;
  };
  if (!result.subset.empty()) {
    result.lower = table(kept_lower);
    result.upper = table(kept_upper);
  }
  result.found = complete && result.subset.size() >= options.min_size;
  return result;
}

}  // namespace lkoethe
