#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace omlog::neural {

void softmax(std::span<const double> logits, std::span<double> probs);

// -log softmax(logits)[target]. Writes dL/dlogits when dlogits is non-empty.
// Throws NumericError naming `tensor` on non-finite input.
double softmax_cross_entropy(std::span<const double> logits, std::size_t target, std::span<double> dlogits,
                             std::string_view tensor = "logits");

// sum_c (softmax(logits)_c - onehot(target)_c)^2
double softmax_squared_error(std::span<const double> logits, std::size_t target, std::span<double> dlogits,
                             std::string_view tensor = "logits");

// mean_i (pred_i - target_i)^2
double mse_loss(std::span<const double> pred, std::span<const double> target, std::span<double> dpred,
                std::string_view tensor = "prediction");

}  // namespace omlog::neural
