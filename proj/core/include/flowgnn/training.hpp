#pragma once

#include "flowgnn/dataset.hpp"
#include "flowgnn/network.hpp"

#include <cstdint>

namespace flowgnn {

struct TrainConfig {
    double lr = 1e-3;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
    bool standardize_targets = true;
    /// Stop once validation R^2 reaches this value; 0 disables.
    double early_stop_r2 = 0.0;
    ModelConfig model;
};

struct EpochStats {
    /// Running mean of per-sample training losses over the epoch, divided by
    /// training-target variance (NMSE is invariant to target standardization).
    double train_nmse = 0.0;
    double val_nmse = 0.0;
};

using TrainHistory = std::vector<EpochStats>;

struct Metrics {
    double mse = 0.0;
    double nmse = 0.0;
    double r2 = 0.0;
    /// False when target variance is zero: nmse/r2 are NaN markers, mse valid.
    bool normalized_defined = true;
    std::vector<double> residuals;
};

struct TrainResult {
    ModelParams params;
    TrainHistory history;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> val_indices;
};

/// Seeded shuffle split: first block trains, remainder validates.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

/// Minibatch Adam on MSE over (optionally standardized) targets. History has
/// one entry per completed epoch; divergence aborts with the epoch reported.
/// Deterministic per config.
TrainResult train(const Dataset& dataset, const TrainConfig& config);

Metrics evaluate(ModelParams& params, const Dataset& dataset);
Metrics evaluate(ModelParams& params, const Dataset& dataset,
                 const std::vector<std::size_t>& indices);

struct AblationResult {
    TrainHistory with_skip;
    TrainHistory without_skip;
};

/// Trains with and without the readout skip sum under the identical seed.
AblationResult ablate_skip(const Dataset& dataset, const TrainConfig& config);

} // namespace flowgnn
