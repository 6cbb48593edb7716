#include "omlog/neural/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace omlog::neural {

GradientCheckReport gradient_check(ParameterStore& params, const std::function<double()>& loss,
                                   const std::function<void()>& backward, double tolerance, double step) {
    GradientCheckReport report;
    report.tolerance = tolerance;
    params.zero_grad();
    backward();

    for (auto* p : params.items()) {
        ParameterCheck check;
        check.name = p->name;
        const Tensor analytic = p->grad;
        auto values = p->value.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double original = values[i];
            values[i] = original + step;
            const double up = loss();
            values[i] = original - step;
            const double down = loss();
            values[i] = original;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic[i];
            if (a == 0.0 && numeric == 0.0) {
                ++check.skipped;
                continue;
            }
            ++check.checked;
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
            if (!(rel <= check.max_rel_error)) {
                check.max_rel_error = std::isnan(rel) ? INFINITY : rel;
                check.worst_index = i;
                check.worst_analytic = a;
                check.worst_numeric = numeric;
            }
        }
        report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
        report.params.push_back(std::move(check));
    }
    report.passed = report.max_rel_error < tolerance;
    return report;
}

std::string describe(const GradientCheckReport& report) {
    std::ostringstream os;
    os << (report.passed ? "PASS" : "FAIL") << " max rel error " << report.max_rel_error << " (tolerance "
       << report.tolerance << ")";
    for (const auto& p : report.params) {
        os << "\n  " << p.name << ": checked " << p.checked << ", skipped " << p.skipped << ", max "
           << p.max_rel_error;
        if (p.max_rel_error > 0.0) {
            os << " at [" << p.worst_index << "] analytic " << p.worst_analytic << " numeric " << p.worst_numeric;
        }
    }
    return os.str();
}

}  // namespace omlog::neural
