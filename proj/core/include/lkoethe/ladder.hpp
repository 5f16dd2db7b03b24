#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace lkoethe {

inline constexpr double kDefaultDivergenceRatio = 1.5;

// Trend of a quantity recomputed over an increasing truncation ladder, judged
// on the last three rungs. Divergent: both steps grow by >= ratio. Stable:
// both steps grow by < ratio. Fewer than three rungs, or mixed steps, leave
// the trend undetermined.
enum class LadderTrend { kStable, kDivergent, kUndetermined };

LadderTrend classify_ladder(std::span<const double> log_values,
                            double divergence_ratio = kDefaultDivergenceRatio);

std::string_view to_string(LadderTrend trend);

// Throws InvalidInput unless the rungs are positive and strictly increasing.
void validate_ladder(std::span<const std::size_t> ladder);

}  // namespace lkoethe
