#include "omlog/neural/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "omlog/errors.hpp"

namespace omlog::neural {
namespace {

void require_finite(std::span<const double> v, std::string_view tensor) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NumericError("non-finite value in " + std::string(tensor));
    }
}

}  // namespace

void softmax(std::span<const double> logits, std::span<double> probs) {
    if (logits.size() != probs.size() || logits.empty()) throw std::invalid_argument("softmax: shape mismatch");
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - m);
        z += probs[i];
    }
    for (auto& p : probs) p /= z;
}

double softmax_cross_entropy(std::span<const double> logits, std::size_t target, std::span<double> dlogits,
                             std::string_view tensor) {
    require_finite(logits, tensor);
    if (target >= logits.size()) throw std::invalid_argument("cross entropy: target out of range");
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - m);
    const double log_z = m + std::log(z);
    if (!dlogits.empty()) {
        if (dlogits.size() != logits.size()) throw std::invalid_argument("cross entropy: gradient shape mismatch");
        for (std::size_t i = 0; i < logits.size(); ++i) dlogits[i] = std::exp(logits[i] - log_z);
        dlogits[target] -= 1.0;
    }
    return log_z - logits[target];
}

double softmax_squared_error(std::span<const double> logits, std::size_t target, std::span<double> dlogits,
                             std::string_view tensor) {
    require_finite(logits, tensor);
    if (target >= logits.size()) throw std::invalid_argument("squared error: target out of range");
    std::vector<double> p(logits.size());
    softmax(logits, p);
    double loss = 0.0;
    std::vector<double> g(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double diff = p[c] - (c == target ? 1.0 : 0.0);
        loss += diff * diff;
        g[c] = 2.0 * diff;
    }
    if (!dlogits.empty()) {
        if (dlogits.size() != logits.size()) throw std::invalid_argument("squared error: gradient shape mismatch");
        // Softmax Jacobian: dz_j = p_j (g_j - sum_c p_c g_c)
        double pg = 0.0;
        for (std::size_t c = 0; c < p.size(); ++c) pg += p[c] * g[c];
        for (std::size_t j = 0; j < p.size(); ++j) dlogits[j] = p[j] * (g[j] - pg);
    }
    return loss;
}

double mse_loss(std::span<const double> pred, std::span<const double> target, std::span<double> dpred,
                std::string_view tensor) {
    if (pred.size() != target.size() || pred.empty()) throw std::invalid_argument("mse: shape mismatch");
    require_finite(pred, tensor);
    const double n = static_cast<double>(pred.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        loss += d * d;
    }
    if (!dpred.empty()) {
        if (dpred.size() != pred.size()) throw std::invalid_argument("mse: gradient shape mismatch");
        for (std::size_t i = 0; i < pred.size(); ++i) dpred[i] = 2.0 * (pred[i] - target[i]) / n;
    }
    return loss / n;
}

}  // namespace omlog::neural
