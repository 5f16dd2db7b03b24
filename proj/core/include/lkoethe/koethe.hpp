#pragma once

// Köthe matrices A = (a_n^k) and graded seminorms of truncated l-Köthe spaces.
// Levels k and indices n are 1-based throughout. Entries are stored as
// log a_n^k.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lkoethe/seqnorm.hpp"

namespace lkoethe {

struct AlphaList {
  std::vector<double> values;
  bool operator==(const AlphaList&) const = default;
};

// Closed-form rule in the variable n.
struct AlphaFormula {
  std::string formula;
  bool operator==(const AlphaFormula&) const = default;
};

using AlphaRule = std::variant<AlphaList, AlphaFormula>;

struct ExplicitGrid {
  std::size_t levels = 0;
  std::size_t dims = 0;
  std::vector<double> log_entries;  // row-major, levels x dims
  bool operator==(const ExplicitGrid&) const = default;
};

// log a_n^k = k * alpha_n
struct PowerSeriesInfinite {
  AlphaRule alpha;
  bool operator==(const PowerSeriesInfinite&) const = default;
};

// log a_n^k = -alpha_n / k
struct PowerSeriesFinite {
  AlphaRule alpha;
  bool operator==(const PowerSeriesFinite&) const = default;
};

// log a_n^k = f(k, n)
struct LogFormula {
  std::string formula;
  bool operator==(const LogFormula&) const = default;
};

struct KoetheMatrixSpec {
  using Kind = std::variant<ExplicitGrid, PowerSeriesInfinite, PowerSeriesFinite, LogFormula>;

  Kind kind;
  // Default materialization size; ladder runs may build at other sizes.
  std::size_t levels = 1;
  std::size_t dims = 1;

  std::string kind_name() const;
  bool operator==(const KoetheMatrixSpec&) const = default;
};

class KoetheMatrix {
 public:
  // Materializes and validates (positivity, a_n^k <= a_n^{k+1}). Throws
  // ValidationFailed listing every violating cell.
  static KoetheMatrix build(const KoetheMatrixSpec& spec, std::size_t levels, std::size_t dims);
  static KoetheMatrix build(const KoetheMatrixSpec& spec) {
    return build(spec, spec.levels, spec.dims);
  }

  std::size_t levels() const noexcept { return levels_; }
  std::size_t dims() const noexcept { return dims_; }

  double log_entry(std::size_t k, std::size_t n) const;
  // Level k, indices 1..dims.
  std::span<const double> log_row(std::size_t k) const;
  std::span<const double> log_entries() const noexcept { return log_entries_; }

  KoetheMatrix truncate(std::size_t levels, std::size_t dims) const;

  const KoetheMatrixSpec& provenance() const noexcept { return *provenance_; }

  // Compares grids bit for bit (provenance ignored).
  bool same_grid(const KoetheMatrix& other) const;

 private:
  KoetheMatrix(std::size_t levels, std::size_t dims, std::vector<double> log_entries,
               std::shared_ptr<const KoetheMatrixSpec> provenance)
      : levels_(levels),
        dims_(dims),
        log_entries_(std::move(log_entries)),
        provenance_(std::move(provenance)) {}

  std::size_t levels_;
  std::size_t dims_;
  std::vector<double> log_entries_;
  std::shared_ptr<const KoetheMatrixSpec> provenance_;
};

// A finite member (x_n) of a truncated l-Köthe space.
class GradedVector {
 public:
  explicit GradedVector(std::vector<double> coeffs);
  // Unit vector e_n (1-based) of length dims.
  static GradedVector basis(std::size_t n, std::size_t dims);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }

 private:
  std::vector<double> coeffs_;
};

// ||x||_k = ||(x_n a_n^k)_n||, evaluated with max-rescaling in log-domain.
double seminorm(const KoetheMatrix& a, const NormSpec& norm, const GradedVector& x, std::size_t k);
double log_seminorm(const KoetheMatrix& a, const NormSpec& norm, const GradedVector& x,
                    std::size_t k);

}  // namespace lkoethe
