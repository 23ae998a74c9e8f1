#pragma once

#include "flowgnn/tensor.hpp"

namespace flowgnn {

/// First/second moment buffers for Adam, one pair per parameter tensor.
/// Buffers are lazily sized on the first step; the parameter list must keep
/// the same order and shapes across steps.
struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    long step = 0;
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam update over `params`. Consumes and zeroes the
/// accumulated gradients.
void adam_step(std::vector<Tensor>& params, AdamState& state, const AdamConfig& config);

struct SgdMomentumState {
    std::vector<std::vector<double>> velocity;
};

/// v = momentum*v - lr*g; p += v. Consumes and zeroes gradients.
void sgd_momentum_step(std::vector<Tensor>& params, SgdMomentumState& state, double lr,
                       double momentum);

} // namespace flowgnn
