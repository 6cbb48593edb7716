#include "omlog/analysis/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace omlog {
namespace {

template <typename T, typename Cost>
double dtw(std::span<const T> x, std::span<const T> y, Cost cost) {
    if (x.empty() || y.empty()) throw std::invalid_argument("DTW needs two non-empty sequences");
    const auto inf = std::numeric_limits<double>::infinity();
    // Two rolling rows of the (|x|+1) x (|y|+1) table.
    std::vector<double> prev(y.size() + 1, inf), cur(y.size() + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            cur[j] = cost(x[i - 1], y[j - 1]) + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

}  // namespace

double dtw_distance(std::span<const EventId> x, std::span<const EventId> y, DtwCost cost) {
    if (cost == DtwCost::Categorical) {
        return dtw(x, y, [](EventId a, EventId b) { return a == b ? 0.0 : 1.0; });
    }
    return dtw(x, y, [](EventId a, EventId b) { return std::abs(static_cast<double>(a) - static_cast<double>(b)); });
}

double dtw_distance(std::span<const double> x, std::span<const double> y) {
    return dtw(x, y, [](double a, double b) { return std::abs(a - b); });
}

}  // namespace omlog
