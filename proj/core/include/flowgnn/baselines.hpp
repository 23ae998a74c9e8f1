#pragma once

#include "flowgnn/dataset.hpp"
#include "flowgnn/pca.hpp"
#include "flowgnn/tensor.hpp"
#include "flowgnn/training.hpp"

#include <cstdint>
#include <string>

namespace flowgnn {

/// Fixed-width feature rows for the non-graph baselines: per sample, the m
/// nodes nearest the mid-chord point in a canonical geometric order, (u,v)
/// interleaved, so column j means the same thing in every row.
struct OrderedFeatureMatrix {
    DataMatrix x;
    std::size_t m = 0;
    /// Node positions backing each column pair, [rows x 2m], for the
    /// cross-sample spatial-consistency audit.
    std::vector<double> node_positions;
};

/// Sorts each sample's nodes by (distance to (0.5, 0), polar angle, index),
/// truncates to m and concatenates velocities. Errors on samples with fewer
/// than m nodes.
OrderedFeatureMatrix ordered_features(const Dataset& dataset, std::size_t m);
OrderedFeatureMatrix ordered_features(const Dataset& dataset, std::size_t m,
                                      const std::vector<std::size_t>& indices);

struct Stump {
    std::uint32_t feature = 0;
    double threshold = 0.0;
    /// Shrinkage-scaled leaf values.
    double left = 0.0;
    double right = 0.0;
};

/// Additive depth-1 ensemble: base mean plus shrunk stump corrections.
struct StumpEnsemble {
    double base = 0.0;
    double shrinkage = 0.1;
    std::vector<Stump> stumps;
};

/// Stagewise least-squares boosting; each stump is the exact greedy fit to
/// the current residuals over all features and midpoint thresholds.
StumpEnsemble train_stumps(const DataMatrix& x, const std::vector<double>& y,
                           std::size_t n_estimators, double shrinkage);
double stump_predict_row(const StumpEnsemble& ensemble, const double* row);
std::vector<double> stump_predict(const StumpEnsemble& ensemble, const DataMatrix& x);

struct MlpConfig {
    std::size_t hidden_layers = 4;
    std::size_t width = 512;
    double lr = 1e-3;
    double momentum = 0.9;
    std::size_t epochs = 60;
    std::size_t batch_size = 32;
    std::uint64_t seed = 1;
};

/// Relu MLP with standardized inputs/targets, trained by momentum SGD on
/// minibatch MSE. Divergence aborts with the epoch reported.
struct MlpModel {
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;
    std::vector<double> input_mean;
    std::vector<double> input_scale;
    TargetScaler target_scaler;
};

MlpModel train_mlp_baseline(const DataMatrix& x, const std::vector<double>& y,
                            const MlpConfig& config);
std::vector<double> mlp_predict(const MlpModel& model, const DataMatrix& x);

struct BenchmarkEntry {
    std::string name;
    double r2 = 0.0;
    double nmse = 0.0;
    std::vector<double> predictions;
};

struct BenchmarkResult {
    std::vector<BenchmarkEntry> entries;
    std::vector<double> val_targets;
    /// Ordered-feature width actually used (clamped to the smallest sample).
    std::size_t ordered_m = 0;
};

struct BenchmarkConfig {
    TrainConfig gcnn;
    MlpConfig mlp;
    std::size_t gb_rounds = 500;
    double gb_shrinkage = 0.1;
    std::size_t ordered_m = 1000;
};

/// Trains GCNN, gradient-boosted stumps and the MLP on the identical split
/// and scores them on the validation samples. The GCNN sees variable-size
/// graphs; the baselines see the truncated ordered matrix. The three-arg
/// form restricts the run to the listed models ("gcnn", "gb_stumps", "mlp");
/// the split stays the same regardless of the selection.
BenchmarkResult benchmark_compare(const Dataset& dataset, const BenchmarkConfig& config);
BenchmarkResult benchmark_compare(const Dataset& dataset, const BenchmarkConfig& config,
                                  const std::vector<std::string>& models);

} // namespace flowgnn
