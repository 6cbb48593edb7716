#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "omlog/neural/parameter_store.hpp"

namespace omlog::neural {

struct ParameterCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t skipped = 0;  // entries with zero analytic and numeric gradient
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

struct GradientCheckReport {
    std::vector<ParameterCheck> params;
    double tolerance = 0.0;
    double max_rel_error = 0.0;
    bool passed = true;
};

// Compares analytic gradients with central differences, per entry:
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
// `loss` evaluates the objective; `backward` zeroes nothing and must
// accumulate d(loss)/d(param) into the grads (the store is zeroed first).
// Failures are reported, never thrown.
GradientCheckReport gradient_check(ParameterStore& params, const std::function<double()>& loss,
                                   const std::function<void()>& backward, double tolerance, double step = 1e-5);

std::string describe(const GradientCheckReport& report);

}  // namespace omlog::neural
