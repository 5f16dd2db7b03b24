#include "lkoethe/ladder.hpp"

#include <cmath>
#include <string>

#include "lkoethe/errors.hpp"
#include "lkoethe/log_math.hpp"

namespace lkoethe {

LadderTrend classify_ladder(std::span<const double> log_values, double divergence_ratio) {
  if (log_values.size() < 3) return LadderTrend::kUndetermined;
  const double threshold = std::log(divergence_ratio);
  const auto tail = log_values.last(3);
  const double g1 = log_growth(tail[0], tail[1]);
  const double g2 = log_growth(tail[1], tail[2]);
  if (g1 >= threshold && g2 >= threshold) return LadderTrend::kDivergent;
  if (g1 < threshold && g2 < threshold) return LadderTrend::kStable;
  return LadderTrend::kUndetermined;
}

std::string_view to_string(LadderTrend trend) {
  switch (trend) {
    case LadderTrend::kStable:
      return "stable";
    case LadderTrend::kDivergent:
      return "divergent";
    case LadderTrend::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

void validate_ladder(std::span<const std::size_t> ladder) {
  if (ladder.empty()) throw InvalidInput("truncation ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] == 0) throw InvalidInput("truncation ladder rung must be >= 1");
    if (i > 0 && ladder[i] <= ladder[i - 1]) {
      throw InvalidInput("truncation ladder must be strictly increasing (rung " +
                         std::to_string(ladder[i]) + " after " + std::to_string(ladder[i - 1]) +
                         ")");
    }
  }
}

}  // namespace lkoethe
