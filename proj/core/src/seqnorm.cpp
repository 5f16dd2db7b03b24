#include "lkoethe/seqnorm.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lkoethe/errors.hpp"
#include "lkoethe/log_math.hpp"
#include "lkoethe/random.hpp"

namespace lkoethe {

namespace {

constexpr double kUnitBasisTolerance = 1e-12;

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

std::vector<double> sample_vector(Rng& rng, std::size_t dim) {
  std::vector<double> x(dim);
  const double scale = std::exp(rng.uniform(-2.0, 2.0));
  for (auto& v : x) v = scale * rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace

CustomNorm CustomNorm::create(std::string name, Evaluator evaluator, std::size_t dim_cap,
                              std::uint64_t validation_seed) {
  if (!evaluator) throw InvalidInput("custom norm '" + name + "': empty evaluator");
  if (dim_cap == 0) throw InvalidInput("custom norm '" + name + "': dimension cap must be >= 1");

  CustomNorm norm(std::move(name), std::move(evaluator), dim_cap);
  const std::size_t dim = std::min<std::size_t>(dim_cap, 8);
  auto fail = [&](const std::string& axiom) {
    throw InvalidInput("custom norm '" + norm.name_ + "' violates " + axiom + " on sampled input");
  };

  const std::vector<double> zero(dim, 0.0);
  if (norm(zero) != 0.0) fail("norm(0) = 0");

  Rng rng(validation_seed);
  constexpr int kTrials = 64;
  for (int t = 0; t < kTrials; ++t) {
    const auto x = sample_vector(rng, dim);
    const auto y = sample_vector(rng, dim);
    const double nx = norm(x);
    const double ny = norm(y);
    if (!std::isfinite(nx) || nx < 0.0) fail("nonnegativity");
    if (nx == 0.0 && std::any_of(x.begin(), x.end(), [](double v) { return v != 0.0; })) {
      fail("definiteness");
    }

    const double c = rng.uniform(-3.0, 3.0);
    std::vector<double> cx(x);
    for (auto& v : cx) v *= c;
    if (std::fabs(norm(cx) - std::fabs(c) * nx) > 1e-9 * (1.0 + std::fabs(c) * nx)) {
      fail("homogeneity");
    }

    std::vector<double> sum(x);
    for (std::size_t n = 0; n < dim; ++n) sum[n] += y[n];
    if (norm(sum) > nx + ny + 1e-9 * (1.0 + nx + ny)) fail("the triangle inequality");
  }
  return norm;
}

double CustomNorm::operator()(std::span<const double> x) const {
  if (x.size() > dim_cap_) throw CapExceeded("custom norm '" + name_ + "'", x.size(), dim_cap_);
  return evaluator_(x);
}

bool CustomNorm::has_unit_basis(std::size_t dims) const {
  std::vector<double> e(std::min(dims, dim_cap_), 0.0);
  for (std::size_t n = 0; n < e.size(); ++n) {
    e[n] = 1.0;
    if (std::fabs((*this)(e)-1.0) > kUnitBasisTolerance) return false;
    e[n] = 0.0;
  }
  return true;
}

NormSpec NormSpec::lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("l_p norm requires 1 <= p < inf");
  return NormSpec(Kind::kLp, p, nullptr);
}

NormSpec NormSpec::c0() { return NormSpec(Kind::kC0, 0.0, nullptr); }

NormSpec NormSpec::monotonized(CustomNorm base) {
  const std::size_t dims = std::min(base.dim_cap(), kSignEnumerationCap);
  if (!base.has_unit_basis(dims)) {
    throw InvalidInput("custom norm '" + base.name() +
                       "' is not normalized on the canonical basis (||e_n|| != 1)");
  }
  return NormSpec(Kind::kMonotonizedCustom, 0.0,
                  std::make_shared<const CustomNorm>(std::move(base)));
}

NormSpec NormSpec::parse(std::string_view text) {
  if (text == "c0") return c0();
  if (text == "l1") return lp(1.0);
  if (text == "l2") return lp(2.0);
  if (text.starts_with("lp:")) {
    const auto digits = text.substr(3);
    double p = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec == std::errc() && end == digits.data() + digits.size()) return lp(p);
  }
  throw InvalidInput("unknown norm '" + std::string(text) + "' (expected l1, l2, lp:<p>, c0)");
}

const CustomNorm& NormSpec::base() const {
  if (!base_) throw InvalidInput("norm '" + name() + "' has no custom base");
  return *base_;
}

std::size_t NormSpec::dim_cap() const noexcept {
  if (kind_ == Kind::kMonotonizedCustom) return std::min(base_->dim_cap(), kSignEnumerationCap);
  return kDefaultDimCap;
}

std::string NormSpec::name() const {
  switch (kind_) {
    case Kind::kC0:
      return "c0";
    case Kind::kLp: {
      if (p_ == 1.0) return "l1";
      if (p_ == 2.0) return "l2";
      std::ostringstream out;
      out.precision(17);
      out << "lp:" << p_;
      return out.str();
    }
    case Kind::kMonotonizedCustom:
      return "monotonized:" + base_->name();
  }
  return "?";
}

double norm_eval(const NormSpec& norm, std::span<const double> x) {
  if (x.size() > norm.dim_cap()) throw CapExceeded("norm_eval", x.size(), norm.dim_cap());
  require_finite(x, "norm_eval");
  switch (norm.kind()) {
    case NormSpec::Kind::kC0: {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::fabs(v));
      return m;
    }
    case NormSpec::Kind::kLp: {
      const double p = norm.p();
      if (p == 1.0) {
        double s = 0.0;
        for (double v : x) s += std::fabs(v);
        return s;
      }
      double m = 0.0;
      for (double v : x) m = std::max(m, std::fabs(v));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (double v : x) s += std::pow(std::fabs(v) / m, p);
      return m * std::pow(s, 1.0 / p);
    }
    case NormSpec::Kind::kMonotonizedCustom:
      return monotonize(norm.base(), x);
  }
  return 0.0;
}

double log_norm_from_logs(const NormSpec& norm, std::span<const double> log_abs) {
  if (log_abs.size() > norm.dim_cap()) {
    throw CapExceeded("log_norm_from_logs", log_abs.size(), norm.dim_cap());
  }
  double m = kNegInf;
  for (double l : log_abs) {
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) {
      throw InvalidInput("log_norm_from_logs: non-finite log magnitude");
    }
    m = std::max(m, l);
  }
  if (m == kNegInf) return kNegInf;

  switch (norm.kind()) {
    case NormSpec::Kind::kC0:
      return m;
    case NormSpec::Kind::kLp: {
      const double p = norm.p();
      double s = 0.0;
      for (double l : log_abs) s += std::exp(p * (l - m));
      return m + std::log(s) / p;
    }
    case NormSpec::Kind::kMonotonizedCustom: {
      std::vector<double> scaled(log_abs.size());
      for (std::size_t n = 0; n < log_abs.size(); ++n) scaled[n] = std::exp(log_abs[n] - m);
      return m + std::log(monotonize(norm.base(), scaled));
    }
  }
  return kNegInf;
}

double log_weighted_norm(const NormSpec& norm, std::span<const double> x,
                         std::span<const double> log_weights) {
  if (x.size() > log_weights.size()) {
    throw DimMismatch("log_weighted_norm: vector of length " + std::to_string(x.size()) +
                      " exceeds " + std::to_string(log_weights.size()) + " weights");
  }
  require_finite(x, "log_weighted_norm");
  std::vector<double> logs(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) logs[n] = log_abs(x[n]) + log_weights[n];
  return log_norm_from_logs(norm, logs);
}

double monotonize(const CustomNorm& base, std::span<const double> x) {
  const std::size_t dim = x.size();
  if (dim > kSignEnumerationCap) throw CapExceeded("monotonize", dim, kSignEnumerationCap);
  if (dim > base.dim_cap()) throw CapExceeded("monotonize", dim, base.dim_cap());
  require_finite(x, "monotonize");
  if (dim == 0) return base(x);

  // base is even, so the sign of the first coordinate stays fixed. Walk the
  // remaining 2^(d-1) patterns in Gray-code order, one flip per step.
  std::vector<double> signed_x(x.begin(), x.end());
  double best = base(signed_x);
  const std::uint64_t patterns = std::uint64_t{1} << (dim - 1);
  for (std::uint64_t g = 1; g < patterns; ++g) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(g));
    signed_x[bit + 1] = -signed_x[bit + 1];
    best = std::max(best, base(signed_x));
  }
  return best;
}

double dual_coord_norm(const NormSpec& norm, std::span<const double> weights, std::size_t i) {
  if (weights.size() > norm.dim_cap()) {
    throw CapExceeded("dual_coord_norm", weights.size(), norm.dim_cap());
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("dual_coord_norm: non-positive weight");
  }
  if (i < 1 || i > weights.size()) {
    throw IndexError("dual_coord_norm: coordinate " + std::to_string(i) + " out of range 1.." +
                     std::to_string(weights.size()));
  }
  return 1.0 / weights[i - 1];
}

MonotoneCheck check_monotone(const NormSpec& norm, std::size_t trials, std::size_t dim,
                             std::uint64_t seed) {
  if (dim > norm.dim_cap()) throw CapExceeded("check_monotone", dim, norm.dim_cap());
  constexpr double kTolerance = 1e-12;
  MonotoneCheck result;
  Rng rng(seed);
  std::vector<double> x(dim), y(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    const double scale = std::exp(rng.uniform(-3.0, 3.0));
    for (std::size_t n = 0; n < dim; ++n) {
      y[n] = scale * rng.uniform(-1.0, 1.0);
      double shrink = rng.uniform(-1.0, 1.0);
      // Boundary cases of domination: equal modulus, opposite sign, zero.
      switch (rng.index(0, 7)) {
        case 0: shrink = 1.0; break;
        case 1: shrink = -1.0; break;
        case 2: shrink = 0.0; break;
        default: break;
      }
      x[n] = shrink * y[n];
    }
    ++result.trials_run;
    if (norm_eval(norm, x) > norm_eval(norm, y) + kTolerance) {
      result.passed = false;
      result.counterexample.emplace(x, y);
      break;
    }
  }
  return result;
}

}  // namespace lkoethe
