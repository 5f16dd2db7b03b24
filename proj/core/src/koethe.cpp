#include "lkoethe/koethe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "lkoethe/errors.hpp"
#include "lkoethe/expr.hpp"

namespace lkoethe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> materialize_alpha(const AlphaRule& rule, std::size_t dims) {
  std::vector<double> alpha(dims);
  std::visit(Overloaded{
                 [&](const AlphaList& list) {
                   if (list.values.size() < dims) {
                     throw InvalidInput("alpha list has " + std::to_string(list.values.size()) +
                                        " entries, " + std::to_string(dims) + " needed");
                   }
                   std::copy_n(list.values.begin(), dims, alpha.begin());
                 },
                 [&](const AlphaFormula& f) {
                   const auto expr = Expression::parse(f.formula, {"n"});
                   for (std::size_t n = 1; n <= dims; ++n) {
                     const double arg = static_cast<double>(n);
                     alpha[n - 1] = expr.evaluate(std::span<const double>(&arg, 1));
                   }
                 },
             },
             rule);
  return alpha;
}

void check_level(std::size_t k, std::size_t levels, const char* what) {
  if (k < 1 || k > levels) {
    throw IndexError(std::string(what) + ": level " + std::to_string(k) + " outside 1.." +
                     std::to_string(levels));
  }
}

}  // namespace

std::string KoetheMatrixSpec::kind_name() const {
  return std::visit(Overloaded{
                        [](const ExplicitGrid&) { return "explicit"; },
                        [](const PowerSeriesInfinite&) { return "power_series_infinite"; },
                        [](const PowerSeriesFinite&) { return "power_series_finite"; },
                        [](const LogFormula&) { return "expr"; },
                    },
                    kind);
}

KoetheMatrix KoetheMatrix::build(const KoetheMatrixSpec& spec, std::size_t levels,
                                 std::size_t dims) {
  if (levels < 1 || dims < 1) throw InvalidInput("Köthe matrix needs at least one level and index");

  std::vector<double> grid(levels * dims);
  std::visit(
      Overloaded{
          [&](const ExplicitGrid& g) {
            if (g.log_entries.size() != g.levels * g.dims) {
              throw InvalidInput("explicit grid holds " + std::to_string(g.log_entries.size()) +
                                 " entries, expected levels*dims = " +
                                 std::to_string(g.levels * g.dims));
            }
            if (levels > g.levels || dims > g.dims) {
              throw IndexError("explicit grid is " + std::to_string(g.levels) + "x" +
                               std::to_string(g.dims) + ", requested " + std::to_string(levels) +
                               "x" + std::to_string(dims));
            }
            for (std::size_t k = 0; k < levels; ++k) {
              std::copy_n(g.log_entries.begin() + static_cast<std::ptrdiff_t>(k * g.dims), dims,
                          grid.begin() + static_cast<std::ptrdiff_t>(k * dims));
            }
          },
          [&](const PowerSeriesInfinite& ps) {
            const auto alpha = materialize_alpha(ps.alpha, dims);
            for (std::size_t k = 1; k <= levels; ++k) {
              for (std::size_t n = 1; n <= dims; ++n) {
                grid[(k - 1) * dims + n - 1] = static_cast<double>(k) * alpha[n - 1];
              }
            }
          },
          [&](const PowerSeriesFinite& ps) {
            const auto alpha = materialize_alpha(ps.alpha, dims);
            for (std::size_t k = 1; k <= levels; ++k) {
              for (std::size_t n = 1; n <= dims; ++n) {
                grid[(k - 1) * dims + n - 1] = -alpha[n - 1] / static_cast<double>(k);
              }
            }
          },
          [&](const LogFormula& f) {
            const auto expr = Expression::parse(f.formula, {"k", "n"});
            for (std::size_t k = 1; k <= levels; ++k) {
              for (std::size_t n = 1; n <= dims; ++n) {
                const double args[] = {static_cast<double>(k), static_cast<double>(n)};
                grid[(k - 1) * dims + n - 1] = expr.evaluate(args);
              }
            }
          },
      },
      spec.kind);

  std::vector<MatrixViolation> violations;
  for (std::size_t k = 1; k <= levels; ++k) {
    for (std::size_t n = 1; n <= dims; ++n) {
      const double entry = grid[(k - 1) * dims + n - 1];
      if (!std::isfinite(entry)) {
        violations.push_back({n, k, k, "entry is not a positive finite real"});
      }
    }
  }
  for (std::size_t k = 1; k < levels; ++k) {
    for (std::size_t n = 1; n <= dims; ++n) {
      const double lo = grid[(k - 1) * dims + n - 1];
      const double hi = grid[k * dims + n - 1];
      if (std::isfinite(lo) && std::isfinite(hi) && lo > hi) {
        violations.push_back({n, k, k + 1, "a_n^k > a_n^{k+1}"});
      }
    }
  }
  if (!violations.empty()) {
    throw ValidationFailed("Köthe matrix (" + spec.kind_name() + ") failed validation",
                           std::move(violations));
  }
  return KoetheMatrix(levels, dims, std::move(grid), std::make_shared<const KoetheMatrixSpec>(spec));
}

double KoetheMatrix::log_entry(std::size_t k, std::size_t n) const {
  check_level(k, levels_, "log_entry");
  if (n < 1 || n > dims_) {
    throw IndexError("log_entry: index " + std::to_string(n) + " outside 1.." +
                     std::to_string(dims_));
  }
  return log_entries_[(k - 1) * dims_ + n - 1];
}

std::span<const double> KoetheMatrix::log_row(std::size_t k) const {
  check_level(k, levels_, "log_row");
  return std::span<const double>(log_entries_).subspan((k - 1) * dims_, dims_);
}

KoetheMatrix KoetheMatrix::truncate(std::size_t levels, std::size_t dims) const {
  if (levels < 1 || dims < 1 || levels > levels_ || dims > dims_) {
    throw IndexError("truncate: " + std::to_string(levels) + "x" + std::to_string(dims) +
                     " does not fit in " + std::to_string(levels_) + "x" + std::to_string(dims_));
  }
  std::vector<double> grid(levels * dims);
  for (std::size_t k = 0; k < levels; ++k) {
    std::copy_n(log_entries_.begin() + static_cast<std::ptrdiff_t>(k * dims_), dims,
                grid.begin() + static_cast<std::ptrdiff_t>(k * dims));
  }
  return KoetheMatrix(levels, dims, std::move(grid), provenance_);
}

bool KoetheMatrix::same_grid(const KoetheMatrix& other) const {
  if (levels_ != other.levels_ || dims_ != other.dims_) return false;
  for (std::size_t i = 0; i < log_entries_.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(log_entries_[i]) !=
        std::bit_cast<std::uint64_t>(other.log_entries_[i])) {
      return false;
    }
  }
  return true;
}

GradedVector::GradedVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidInput("graded vector has a non-finite coefficient");
  }
}

GradedVector GradedVector::basis(std::size_t n, std::size_t dims) {
  if (n < 1 || n > dims) {
    throw IndexError("basis vector e_" + std::to_string(n) + " outside 1.." + std::to_string(dims));
  }
  std::vector<double> e(dims, 0.0);
  e[n - 1] = 1.0;
  return GradedVector(std::move(e));
}

double log_seminorm(const KoetheMatrix& a, const NormSpec& norm, const GradedVector& x,
                    std::size_t k) {
  check_level(k, a.levels(), "seminorm");
  if (x.size() > a.dims()) {
    throw IndexError("seminorm: vector length " + std::to_string(x.size()) + " exceeds " +
                     std::to_string(a.dims()) + " indices");
  }
  return log_weighted_norm(norm, x.coeffs(), a.log_row(k));
}

double seminorm(const KoetheMatrix& a, const NormSpec& norm, const GradedVector& x,
                std::size_t k) {
  return std::exp(log_seminorm(a, norm, x, k));
}

}  // namespace lkoethe
