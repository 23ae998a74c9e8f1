#include "flowgnn/training.hpp"
#include "flowgnn/autodiff.hpp"
#include "flowgnn/optimizer.hpp"
#include "flowgnn/rng.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace flowgnn {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split_indices: train fraction must be in (0,1)");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed ^ 0x5eedULL);
    rng.shuffle(order);
    const std::size_t n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> val(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return {std::move(train), std::move(val)};
}

namespace {

double target_variance(const Dataset& ds, const std::vector<std::size_t>& idx) {
    double mean = 0.0;
    for (const auto i : idx)
        mean += ds.samples[i].target;
    mean /= static_cast<double>(idx.size());
    double var = 0.0;
    for (const auto i : idx) {
        const double d = ds.samples[i].target - mean;
        var += d * d;
    }
    return var / static_cast<double>(idx.size());
}

} // namespace

Metrics evaluate(ModelParams& params, const Dataset& dataset,
                 const std::vector<std::size_t>& indices) {
    if (indices.empty())
        throw std::invalid_argument("evaluate: empty evaluation set");
    Metrics m;
    m.residuals.reserve(indices.size());
    double mean_target = 0.0;
    for (const auto i : indices)
        mean_target += dataset.samples[i].target;
    mean_target /= static_cast<double>(indices.size());

    double sq_err = 0.0;
    double sq_dev = 0.0;
    for (const auto i : indices) {
        const auto& s = dataset.samples[i];
        const double pred = predict(s.graph, params);
        const double r = pred - s.target;
        m.residuals.push_back(r);
        sq_err += r * r;
        const double d = s.target - mean_target;
        sq_dev += d * d;
    }
    m.mse = sq_err / static_cast<double>(indices.size());
    if (sq_dev == 0.0) {
        m.normalized_defined = false;
        m.nmse = std::numeric_limits<double>::quiet_NaN();
        m.r2 = std::numeric_limits<double>::quiet_NaN();
    } else {
        m.nmse = sq_err / sq_dev;
        m.r2 = 1.0 - m.nmse;
    }
    return m;
}

Metrics evaluate(ModelParams& params, const Dataset& dataset) {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return evaluate(params, dataset, all);
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
    if (dataset.size() < 10)
        throw std::invalid_argument("train: need at least 10 samples");
    if (config.batch_size == 0)
        throw std::invalid_argument("train: batch size must be positive");

    auto [train_idx, val_idx] = split_indices(dataset.size(), config.train_fraction, config.seed);
    if (train_idx.empty() || val_idx.empty())
        throw std::invalid_argument("train: split leaves an empty set");

    TrainResult result;
    result.params = init_model(config.model, config.seed);
    result.train_indices = train_idx;
    result.val_indices = val_idx;

    if (config.standardize_targets) {
        double mean = 0.0;
        for (const auto i : train_idx)
            mean += dataset.samples[i].target;
        mean /= static_cast<double>(train_idx.size());
        double var = 0.0;
        for (const auto i : train_idx) {
            const double d = dataset.samples[i].target - mean;
            var += d * d;
        }
        var /= static_cast<double>(train_idx.size());
        result.params.scaler.mean = mean;
        result.params.scaler.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    const TargetScaler scaler = result.params.scaler;
    // Running train loss is normalized by variance in the same scaled space;
    // NMSE is invariant to the affine target transform.
    const double train_var_scaled =
        target_variance(dataset, train_idx) / (scaler.stddev * scaler.stddev);

    std::vector<Tensor> params = result.params.parameters();
    AdamState adam;
    AdamConfig adam_config;
    adam_config.lr = config.lr;
    Rng shuffle_rng(config.seed ^ 0xba7c4e5d11ULL);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(train_idx);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size) {
            const std::size_t stop = std::min(train_idx.size(), start + config.batch_size);
            for (std::size_t b = start; b < stop; ++b) {
                const auto& sample = dataset.samples[train_idx[b]];
                const double t = (sample.target - scaler.mean) / scaler.stddev;
                Tape tape;
                TapeScope scope(tape);
                Tensor pred = forward(sample.graph, result.params);
                Tensor loss = mse(pred, Tensor::scalar(t));
                const double loss_value = loss.scalar_value();
                if (!std::isfinite(loss_value))
                    throw std::runtime_error("train: diverged (non-finite loss) at epoch " +
                                             std::to_string(epoch + 1));
                epoch_loss += loss_value;
                backward(loss);
            }
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            for (auto& p : params)
                for (auto& g : p.grad())
                    g *= inv_batch;
            adam_step(params, adam, adam_config);
        }

        EpochStats stats;
        stats.train_nmse = train_var_scaled > 0.0
                               ? epoch_loss / static_cast<double>(train_idx.size()) / train_var_scaled
                               : epoch_loss / static_cast<double>(train_idx.size());
        const Metrics val = evaluate(result.params, dataset, val_idx);
        stats.val_nmse = val.normalized_defined ? val.nmse : val.mse;
        result.history.push_back(stats);

        if (config.early_stop_r2 > 0.0 && val.normalized_defined &&
            val.r2 >= config.early_stop_r2)
            break;
    }
    return result;
}

AblationResult ablate_skip(const Dataset& dataset, const TrainConfig& config) {
    TrainConfig on = config;
    on.model.skip_connection = true;
    TrainConfig off = config;
    off.model.skip_connection = false;
    AblationResult result;
    result.with_skip = train(dataset, on).history;
    result.without_skip = train(dataset, off).history;
    return result;
}

} // namespace flowgnn
