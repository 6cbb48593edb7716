#pragma once

#include <cstddef>

#include "omlog/neural/parameter_store.hpp"

namespace omlog::neural {

struct SgdConfig {
    double learning_rate = 0.00001;
    std::size_t epochs = 100;
    std::size_t eval_every = 20;
    std::size_t batch_size = 1;  // examples averaged per step
};

// theta <- theta - lr * grad_scale * grad. lr == 0 leaves values untouched.
void sgd_step(ParameterStore& params, double learning_rate, double grad_scale = 1.0);

}  // namespace omlog::neural
