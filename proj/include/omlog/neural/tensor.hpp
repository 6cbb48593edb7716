#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace omlog::neural {

// Dense row-major array of doubles with an explicit shape.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }
    std::size_t rank() const { return shape_.size(); }
    std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
    // Product of all trailing dimensions.
    std::size_t row_size() const;

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * row_size() + c]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * row_size() + c]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<double> row(std::size_t r);
    std::span<const double> row(std::size_t r) const;

    void fill(double v);
    // Grows the leading dimension; existing values keep their positions.
    void append_rows(std::size_t n, double fill = 0.0);

    bool all_finite() const;
    std::string shape_string() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

}  // namespace omlog::neural
