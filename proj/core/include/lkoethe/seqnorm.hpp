#pragma once

// Monotone Banach sequence norms on finite truncations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lkoethe {

inline constexpr std::size_t kSignEnumerationCap = 16;
inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 24;

// A user-supplied norm on R^d, d <= dim_cap. The norm axioms are checked on
// sampled inputs at construction; monotonicity is not required.
class CustomNorm {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  // Throws InvalidInput when a sampled axiom check fails.
  static CustomNorm create(std::string name, Evaluator evaluator, std::size_t dim_cap,
                           std::uint64_t validation_seed = 0x6b6f657468ULL);

  double operator()(std::span<const double> x) const;

  const std::string& name() const noexcept { return name_; }
  std::size_t dim_cap() const noexcept { return dim_cap_; }

  // True when ||e_n|| == 1 (within 1e-12) for every n <= dims.
  bool has_unit_basis(std::size_t dims) const;

 private:
  CustomNorm(std::string name, Evaluator evaluator, std::size_t dim_cap)
      : name_(std::move(name)), evaluator_(std::move(evaluator)), dim_cap_(dim_cap) {}

  std::string name_;
  Evaluator evaluator_;
  std::size_t dim_cap_;
};

// Which monotone norm on the ambient sequence space is in force.
class NormSpec {
 public:
  enum class Kind { kLp, kC0, kMonotonizedCustom };

  static NormSpec lp(double p);
  static NormSpec c0();
  // Rejects bases that are not normalized on the canonical basis.
  static NormSpec monotonized(CustomNorm base);
  // "l1", "l2", "lp:<p>", "c0".
  static NormSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  const CustomNorm& base() const;
  std::size_t dim_cap() const noexcept;
  // Permutation-invariant (l_p, c_0).
  bool symmetric() const noexcept { return kind_ != Kind::kMonotonizedCustom; }
  std::string name() const;

 private:
  NormSpec(Kind kind, double p, std::shared_ptr<const CustomNorm> base)
      : kind_(kind), p_(p), base_(std::move(base)) {}

  Kind kind_;
  double p_;
  std::shared_ptr<const CustomNorm> base_;
};

// ||x|| under `norm`. Throws CapExceeded or InvalidInput (non-finite entries).
double norm_eval(const NormSpec& norm, std::span<const double> x);

// log ||v|| where log_abs[n] = log|v_n| (-inf for zero coordinates). Exact on
// single-coordinate vectors: returns the lone log entry unchanged.
double log_norm_from_logs(const NormSpec& norm, std::span<const double> log_abs);

// log ||(x_n * exp(log_weights_n))_n||, the weighted norm used for graded
// seminorms. x may be shorter than log_weights.
double log_weighted_norm(const NormSpec& norm, std::span<const double> x,
                         std::span<const double> log_weights);

// sup over sign vectors b in {-1,+1}^d of base(b * x). Equals the sup over
// |b_n| <= 1 by convexity. d <= 16.
double monotonize(const CustomNorm& base, std::span<const double> x);

// Dual norm of the i-th coordinate functional (1-based) on the space weighted
// by `weights`: 1 / weights_i.
double dual_coord_norm(const NormSpec& norm, std::span<const double> weights, std::size_t i);

struct MonotoneCheck {
  bool passed = true;
  std::size_t trials_run = 0;
  // First dominated pair (|x_n| <= |y_n|) with ||x|| > ||y|| + 1e-12.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> counterexample;
};

MonotoneCheck check_monotone(const NormSpec& norm, std::size_t trials, std::size_t dim,
                             std::uint64_t seed);

}  // namespace lkoethe
