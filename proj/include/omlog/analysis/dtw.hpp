#pragma once

#include <span>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

enum class DtwCost {
    Categorical,         // 0 when ids match, 1 otherwise
    AbsoluteDifference,  // |x - y|
};

// Classic O(|x||y|) DTW with the three-way recurrence
//   D(i,j) = c(i,j) + min(D(i-1,j), D(i,j-1), D(i-1,j-1)).
// Both sequences must be non-empty.
double dtw_distance(std::span<const EventId> x, std::span<const EventId> y, DtwCost cost = DtwCost::Categorical);
double dtw_distance(std::span<const double> x, std::span<const double> y);

}  // namespace omlog
