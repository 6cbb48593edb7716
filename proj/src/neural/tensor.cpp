#include "omlog/neural/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace omlog::neural {

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
    if (shape_.empty()) throw std::invalid_argument("tensor needs at least one dimension");
    const auto n = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
    values_.assign(n, fill);
}

std::size_t Tensor::row_size() const {
    if (shape_.empty()) return 0;
    return std::accumulate(shape_.begin() + 1, shape_.end(), std::size_t{1}, std::multiplies<>());
}

std::span<double> Tensor::row(std::size_t r) {
    const auto n = row_size();
    return std::span<double>(values_).subspan(r * n, n);
}

std::span<const double> Tensor::row(std::size_t r) const {
    const auto n = row_size();
    return std::span<const double>(values_).subspan(r * n, n);
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void Tensor::append_rows(std::size_t n, double fill) {
    if (shape_.empty()) throw std::invalid_argument("cannot grow an empty tensor");
    values_.resize(values_.size() + n * row_size(), fill);
    shape_[0] += n;
}

bool Tensor::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(shape_[i]);
    }
    return s + "]";
}

}  // namespace omlog::neural
