#include "omlog/neural/sgd.hpp"

#include <stdexcept>

namespace omlog::neural {

void sgd_step(ParameterStore& params, double learning_rate, double grad_scale) {
    if (learning_rate < 0.0) throw std::invalid_argument("learning rate must be non-negative");
    if (learning_rate == 0.0) return;
    const double step = learning_rate * grad_scale;
    for (auto* p : params.items()) {
        auto v = p->value.values();
        auto g = p->grad.values();
        if (v.size() != g.size()) throw std::invalid_argument(p->name + ": gradient shape mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
    }
}

}  // namespace omlog::neural
