#pragma once

#include "flowgnn/graph.hpp"
#include "flowgnn/pooling.hpp"
#include "flowgnn/sage.hpp"

#include <cstdint>

namespace flowgnn {

struct ModelConfig {
    std::size_t in_width = 2;
    std::size_t conv_width = 64;
    std::size_t rings = 2;
    double pool_ratio = 0.5;
    /// Hidden widths of the fully connected head; a final width-1 output
    /// layer is implied.
    std::vector<std::size_t> fc_widths = {256, 128, 64};
    bool sage_normalize = false;
    bool skip_connection = true;
};

/// Affine de-standardization applied to the network output at prediction
/// time; identity unless training standardized the targets.
struct TargetScaler {
    double mean = 0.0;
    double stddev = 1.0;
};

struct ModelParams {
    ModelConfig config;
    SageBlockParams block1;
    TopKParams pool1;
    SageBlockParams block2;
    TopKParams pool2;
    std::vector<Tensor> fc_weights;
    std::vector<Tensor> fc_biases;
    TargetScaler scaler;

    /// All trainable tensors in a fixed order (shared-storage handles);
    /// the order defines optimizer-state and checkpoint layout.
    std::vector<Tensor> parameters();
};

/// Glorot-uniform weights, zero biases, unit-normalized random score vectors.
ModelParams init_model(const ModelConfig& config, std::uint64_t seed);

/// Raw network output (standardized target space when a scaler is set).
/// Returns a 1-element tensor so callers can attach a loss.
Tensor forward(const Graph& g, ModelParams& params);

/// Pre-FC readout vector [2*conv_width], the skip sum of both block readouts.
Tensor embed(const Graph& g, ModelParams& params);

/// forward() mapped back through the target scaler.
double predict(const Graph& g, ModelParams& params);

} // namespace flowgnn
