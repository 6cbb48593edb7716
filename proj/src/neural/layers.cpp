#include "omlog/neural/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omlog::neural {

void init_uniform(Tensor& t, std::size_t fan_in, Rng& rng, std::size_t first_row) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto v = t.values();
    for (std::size_t i = first_row * t.row_size(); i < v.size(); ++i) v[i] = dist(rng);
}

Dense::Dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng)
    : weight(name + ".weight", Tensor({out, in})), bias(name + ".bias", Tensor({out})) {
    init_uniform(weight.value, in, rng);
    init_uniform(bias.value, in, rng);
}

void Dense::forward(std::span<const double> x, std::span<double> y) const {
    const auto n_in = in();
    const auto n_out = out();
    if (x.size() != n_in || y.size() != n_out) {
        throw std::invalid_argument(weight.name + ": shape mismatch, expected " + weight.value.shape_string());
    }
    const double* w = weight.value.values().data();
    const double* b = bias.value.values().data();
    for (std::size_t r = 0; r < n_out; ++r) {
        double acc = b[r];
        const double* wr = w + r * n_in;
        for (std::size_t c = 0; c < n_in; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

void Dense::backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx) {
    const auto n_in = in();
    const auto n_out = out();
    if (x.size() != n_in || dy.size() != n_out || (!dx.empty() && dx.size() != n_in)) {
        throw std::invalid_argument(weight.name + ": backward shape mismatch");
    }
    const double* w = weight.value.values().data();
    double* gw = weight.grad.values().data();
    double* gb = bias.grad.values().data();
    if (!dx.empty()) std::fill(dx.begin(), dx.end(), 0.0);
    for (std::size_t r = 0; r < n_out; ++r) {
        const double g = dy[r];
        if (g == 0.0) continue;
        gb[r] += g;
        double* gwr = gw + r * n_in;
        const double* wr = w + r * n_in;
        for (std::size_t c = 0; c < n_in; ++c) gwr[c] += g * x[c];
        if (!dx.empty()) {
            for (std::size_t c = 0; c < n_in; ++c) dx[c] += g * wr[c];
        }
    }
}

void Dense::grow_outputs(std::size_t new_out, Rng& rng) {
    const auto old_out = out();
    if (new_out < old_out) throw std::invalid_argument(weight.name + ": cannot shrink outputs");
    if (new_out == old_out) return;
    weight.value.append_rows(new_out - old_out);
    bias.value.append_rows(new_out - old_out);
    init_uniform(weight.value, in(), rng, old_out);
    init_uniform(bias.value, in(), rng, old_out);
    weight.sync_grad_shape();
    bias.sync_grad_shape();
}

Embedding::Embedding(const std::string& name, std::size_t vocab, std::size_t dim, Rng& rng)
    : table(name + ".table", Tensor({vocab, dim})) {
    init_uniform(table.value, 1, rng);
}

void Embedding::backward(std::size_t id, std::span<const double> dy) {
    auto g = table.grad.row(id);
    if (dy.size() != g.size()) throw std::invalid_argument(table.name + ": backward shape mismatch");
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i];
}

void Embedding::grow(std::size_t new_vocab, Rng& rng) {
    const auto old = vocab();
    if (new_vocab < old) throw std::invalid_argument(table.name + ": cannot shrink vocabulary");
    if (new_vocab == old) return;
    table.value.append_rows(new_vocab - old);
    init_uniform(table.value, 1, rng, old);
    table.sync_grad_shape();
}

LstmCell::LstmCell(const std::string& name, std::size_t input, std::size_t hidden, Rng& rng)
    : w_input(name + ".w_input", Tensor({4 * hidden, input})),
      w_hidden(name + ".w_hidden", Tensor({4 * hidden, hidden})),
      bias(name + ".bias", Tensor({4 * hidden})) {
    init_uniform(w_input.value, hidden, rng);
    init_uniform(w_hidden.value, hidden, rng);
    init_uniform(bias.value, hidden, rng);
}

void LstmCell::forward(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                       Step& s) const {
    const auto E = input();
    const auto H = hidden();
    if (x.size() != E || h_prev.size() != H || c_prev.size() != H) {
        throw std::invalid_argument(w_input.name + ": shape mismatch");
    }
    s.x.assign(x.begin(), x.end());
    s.h_prev.assign(h_prev.begin(), h_prev.end());
    s.c_prev.assign(c_prev.begin(), c_prev.end());
    std::vector<double> z(4 * H);
    const double* wx = w_input.value.values().data();
    const double* wh = w_hidden.value.values().data();
    const double* b = bias.value.values().data();
    for (std::size_t r = 0; r < 4 * H; ++r) {
        double acc = b[r];
        const double* wxr = wx + r * E;
        for (std::size_t c = 0; c < E; ++c) acc += wxr[c] * x[c];
        const double* whr = wh + r * H;
        for (std::size_t c = 0; c < H; ++c) acc += whr[c] * h_prev[c];
        z[r] = acc;
    }
    s.i.resize(H);
    s.f.resize(H);
    s.g.resize(H);
    s.o.resize(H);
    s.c.resize(H);
    s.tanh_c.resize(H);
    s.h.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
        s.i[k] = sigmoid(z[k]);
        s.f[k] = sigmoid(z[H + k]);
        s.g[k] = std::tanh(z[2 * H + k]);
        s.o[k] = sigmoid(z[3 * H + k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = std::tanh(s.c[k]);
        s.h[k] = s.o[k] * s.tanh_c[k];
    }
}

void LstmCell::backward(const Step& s, std::span<const double> dh, std::span<const double> dc,
                        std::span<double> dx, std::span<double> dh_prev, std::span<double> dc_prev) {
    const auto E = input();
    const auto H = hidden();
    if (dh.size() != H || dc.size() != H || dx.size() != E || dh_prev.size() != H || dc_prev.size() != H) {
        throw std::invalid_argument(w_input.name + ": backward shape mismatch");
    }
    std::vector<double> dz(4 * H);
    for (std::size_t k = 0; k < H; ++k) {
        const double d_o = dh[k] * s.tanh_c[k];
        const double d_c = dc[k] + dh[k] * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
        const double d_i = d_c * s.g[k];
        const double d_f = d_c * s.c_prev[k];
        const double d_g = d_c * s.i[k];
        dc_prev[k] = d_c * s.f[k];
        dz[k] = d_i * s.i[k] * (1.0 - s.i[k]);
        dz[H + k] = d_f * s.f[k] * (1.0 - s.f[k]);
        dz[2 * H + k] = d_g * (1.0 - s.g[k] * s.g[k]);
        dz[3 * H + k] = d_o * s.o[k] * (1.0 - s.o[k]);
    }
    const double* wx = w_input.value.values().data();
    const double* wh = w_hidden.value.values().data();
    double* gwx = w_input.grad.values().data();
    double* gwh = w_hidden.grad.values().data();
    double* gb = bias.grad.values().data();
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    for (std::size_t r = 0; r < 4 * H; ++r) {
        const double g = dz[r];
        gb[r] += g;
        double* gwxr = gwx + r * E;
        const double* wxr = wx + r * E;
        for (std::size_t c = 0; c < E; ++c) {
            gwxr[c] += g * s.x[c];
            dx[c] += g * wxr[c];
        }
        double* gwhr = gwh + r * H;
        const double* whr = wh + r * H;
        for (std::size_t c = 0; c < H; ++c) {
            gwhr[c] += g * s.h_prev[c];
            dh_prev[c] += g * whr[c];
        }
    }
}

}  // namespace omlog::neural
