#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omlog/neural/tensor.hpp"

namespace omlog::neural {

struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}

    // Keeps grad shaped like value after growth.
    void sync_grad_shape() { grad = Tensor(value.shape()); }
};

// Exact copy of parameter values, in registration order.
struct ParameterSnapshot {
    std::vector<std::string> names;
    std::vector<Tensor> values;
};

// Non-owning, ordered view over the parameters of a model. Models own their
// parameters by value; a store is rebuilt from them whenever needed.
class ParameterStore {
public:
    void add(Parameter& p) { items_.push_back(&p); }

    const std::vector<Parameter*>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    std::size_t scalar_count() const;

    Parameter& find(std::string_view name) const;

    void zero_grad();
    bool grads_finite() const;
    bool values_finite() const;

    ParameterSnapshot snapshot() const;
    // Bit-exact restore; names and shapes must match the snapshot.
    void restore(const ParameterSnapshot& snap);

private:
    std::vector<Parameter*> items_;
};

}  // namespace omlog::neural
