#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "omlog/neural/parameter_store.hpp"

namespace omlog::neural {

using Rng = std::mt19937_64;

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) over rows [first_row, rows).
void init_uniform(Tensor& t, std::size_t fan_in, Rng& rng, std::size_t first_row = 0);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b, W is [out x in].
class Dense {
public:
    Dense() = default;
    Dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng);

    std::size_t in() const { return weight.value.shape()[1]; }
    std::size_t out() const { return weight.value.shape()[0]; }

    void forward(std::span<const double> x, std::span<double> y) const;
    // Accumulates dW, db; writes dx when it is non-empty.
    void backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx);
    // Appends output rows; existing rows are untouched.
    void grow_outputs(std::size_t new_out, Rng& rng);

    void collect(ParameterStore& store) {
        store.add(weight);
        store.add(bias);
    }

    Parameter weight;
    Parameter bias;
};

// Lookup table, one row per event id.
class Embedding {
public:
    Embedding() = default;
    Embedding(const std::string& name, std::size_t vocab, std::size_t dim, Rng& rng);

    std::size_t vocab() const { return table.value.rows(); }
    std::size_t dim() const { return table.value.row_size(); }

    std::span<const double> lookup(std::size_t id) const { return table.value.row(id); }
    void backward(std::size_t id, std::span<const double> dy);
    void grow(std::size_t new_vocab, Rng& rng);

    void collect(ParameterStore& store) { store.add(table); }

    Parameter table;
};

// Single LSTM cell; gate blocks ordered input, forget, candidate, output.
class LstmCell {
public:
    struct Step {
        std::vector<double> x, h_prev, c_prev;
        std::vector<double> i, f, g, o;
        std::vector<double> c, tanh_c, h;
    };

    LstmCell() = default;
    LstmCell(const std::string& name, std::size_t input, std::size_t hidden, Rng& rng);

    std::size_t input() const { return w_input.value.shape()[1]; }
    std::size_t hidden() const { return w_hidden.value.shape()[1]; }

    void forward(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                 Step& step) const;
    // dh, dc: gradients w.r.t. this step's h and c. Accumulates parameter
    // gradients and writes dx, dh_prev, dc_prev.
    void backward(const Step& step, std::span<const double> dh, std::span<const double> dc, std::span<double> dx,
                  std::span<double> dh_prev, std::span<double> dc_prev);

    void collect(ParameterStore& store) {
        store.add(w_input);
        store.add(w_hidden);
        store.add(bias);
    }

    Parameter w_input;   // [4H x E]
    Parameter w_hidden;  // [4H x H]
    Parameter bias;      // [4H]
};

}  // namespace omlog::neural
