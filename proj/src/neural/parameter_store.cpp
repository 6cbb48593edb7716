#include "omlog/neural/parameter_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace omlog::neural {

std::size_t ParameterStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto* p : items_) n += p->value.size();
    return n;
}

Parameter& ParameterStore::find(std::string_view name) const {
    for (auto* p : items_) {
        if (p->name == name) return *p;
    }
    throw std::out_of_range("no parameter named " + std::string(name));
}

void ParameterStore::zero_grad() {
    for (auto* p : items_) {
        if (p->grad.shape() != p->value.shape()) p->sync_grad_shape();
        p->grad.fill(0.0);
    }
}

bool ParameterStore::grads_finite() const {
    return std::all_of(items_.begin(), items_.end(), [](const Parameter* p) { return p->grad.all_finite(); });
}

bool ParameterStore::values_finite() const {
    return std::all_of(items_.begin(), items_.end(), [](const Parameter* p) { return p->value.all_finite(); });
}

ParameterSnapshot ParameterStore::snapshot() const {
    ParameterSnapshot snap;
    for (const auto* p : items_) {
        snap.names.push_back(p->name);
        snap.values.push_back(p->value);
    }
    return snap;
}

void ParameterStore::restore(const ParameterSnapshot& snap) {
    if (snap.values.size() != items_.size()) throw std::invalid_argument("snapshot does not match parameter set");
    for (std::size_t i = 0; i < items_.size(); ++i) {
        auto* p = items_[i];
        if (p->name != snap.names[i] || p->value.shape() != snap.values[i].shape()) {
            throw std::invalid_argument("snapshot mismatch at parameter " + p->name);
        }
        p->value = snap.values[i];
    }
}

}  // namespace omlog::neural
