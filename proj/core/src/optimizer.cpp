#include "flowgnn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowgnn {

void adam_step(std::vector<Tensor>& params, AdamState& state, const AdamConfig& config) {
    if (state.m.empty()) {
        state.m.resize(params.size());
        state.v.resize(params.size());
        for (std::size_t p = 0; p < params.size(); ++p) {
            state.m[p].assign(params[p].numel(), 0.0);
            state.v[p].assign(params[p].numel(), 0.0);
        }
    }
    if (state.m.size() != params.size())
        throw std::invalid_argument("adam_step: state does not match parameter list");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& param = params[p];
        if (state.m[p].size() != param.numel())
            throw std::invalid_argument("adam_step: parameter shape changed between steps");
        auto& g = param.grad();
        auto& m = state.m[p];
        auto& v = state.v[p];
        double* w = param.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            w[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
        }
        std::fill(g.begin(), g.end(), 0.0);
    }
}

void sgd_momentum_step(std::vector<Tensor>& params, SgdMomentumState& state, double lr,
                       double momentum) {
    if (state.velocity.empty()) {
        state.velocity.resize(params.size());
        for (std::size_t p = 0; p < params.size(); ++p)
            state.velocity[p].assign(params[p].numel(), 0.0);
    }
    if (state.velocity.size() != params.size())
        throw std::invalid_argument("sgd_momentum_step: state does not match parameter list");

    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& param = params[p];
        auto& g = param.grad();
        auto& vel = state.velocity[p];
        double* w = param.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
            vel[i] = momentum * vel[i] - lr * g[i];
            w[i] += vel[i];
        }
        std::fill(g.begin(), g.end(), 0.0);
    }
}

} // namespace flowgnn
