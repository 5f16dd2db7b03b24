#include "lkoethe/log_math.hpp"

#include <algorithm>

namespace lkoethe {

double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return kNegInf;
  const double max_arg = *std::max_element(args.begin(), args.end());
  if (max_arg == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - max_arg);
  return max_arg + std::log(sum);
}

}  // namespace lkoethe
