#include "flowgnn/baselines.hpp"
#include "flowgnn/autodiff.hpp"
#include "flowgnn/optimizer.hpp"
#include "flowgnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace flowgnn {

namespace {
// Mid-chord reference point shared by every sample (unit-chord profiles).
constexpr double kRefX = 0.5;
constexpr double kRefY = 0.0;
} // namespace

OrderedFeatureMatrix ordered_features(const Dataset& dataset, std::size_t m,
                                      const std::vector<std::size_t>& indices) {
    if (m == 0)
        throw std::invalid_argument("ordered_features: m must be positive");
    OrderedFeatureMatrix out;
    out.m = m;
    out.x.rows = indices.size();
    out.x.cols = 2 * m;
    out.x.values.resize(indices.size() * 2 * m);
    out.node_positions.resize(indices.size() * 2 * m);

    for (std::size_t row = 0; row < indices.size(); ++row) {
        const auto& sample = dataset.samples[indices[row]];
        const Graph& g = sample.graph;
        if (!g.has_positions())
            throw std::invalid_argument("ordered_features: sample " +
                                        std::to_string(indices[row]) + " has no node positions");
        const std::size_t n = g.num_nodes();
        if (n < m)
            throw std::invalid_argument("ordered_features: sample " +
                                        std::to_string(indices[row]) + " has " +
                                        std::to_string(n) + " nodes, need " + std::to_string(m));

        const auto& pos = g.positions();
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::vector<double> dist(n), angle(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = pos[2 * i] - kRefX;
            const double dy = pos[2 * i + 1] - kRefY;
            dist[i] = std::hypot(dx, dy);
            angle[i] = std::atan2(dy, dx);
        }
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (dist[a] != dist[b])
                return dist[a] < dist[b];
            if (angle[a] != angle[b])
                return angle[a] < angle[b];
            return a < b;
        });

        const auto& feat = g.features().values();
        for (std::size_t j = 0; j < m; ++j) {
            const std::uint32_t node = order[j];
            out.x.values[row * 2 * m + 2 * j] = feat[2 * node];
            out.x.values[row * 2 * m + 2 * j + 1] = feat[2 * node + 1];
            out.node_positions[row * 2 * m + 2 * j] = pos[2 * node];
            out.node_positions[row * 2 * m + 2 * j + 1] = pos[2 * node + 1];
        }
    }
    return out;
}

OrderedFeatureMatrix ordered_features(const Dataset& dataset, std::size_t m) {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return ordered_features(dataset, m, all);
}

StumpEnsemble train_stumps(const DataMatrix& x, const std::vector<double>& y,
                           std::size_t n_estimators, double shrinkage) {
    if (x.rows == 0 || x.rows != y.size())
        throw std::invalid_argument("train_stumps: empty data or row/target mismatch");
    if (n_estimators == 0)
        throw std::invalid_argument("train_stumps: need at least one round");

    const std::size_t n = x.rows;
    const std::size_t d = x.cols;

    StumpEnsemble ensemble;
    ensemble.shrinkage = shrinkage;
    ensemble.base = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i)
        residual[i] = y[i] - ensemble.base;

    // Per-feature sample order, computed once; threshold scans walk it with
    // prefix sums of the current residuals.
    std::vector<std::vector<std::uint32_t>> sorted(d);
    for (std::size_t f = 0; f < d; ++f) {
        sorted[f].resize(n);
        std::iota(sorted[f].begin(), sorted[f].end(), 0u);
        std::sort(sorted[f].begin(), sorted[f].end(), [&](std::uint32_t a, std::uint32_t b) {
            const double va = x.at(a, f);
            const double vb = x.at(b, f);
            if (va != vb)
                return va < vb;
            return a < b;
        });
    }

    for (std::size_t round = 0; round < n_estimators; ++round) {
        const double total = std::accumulate(residual.begin(), residual.end(), 0.0);
        double best_gain = -1.0;
        std::uint32_t best_feature = 0;
        double best_threshold = 0.0;
        double best_left = 0.0;
        double best_right = 0.0;

        for (std::size_t f = 0; f < d; ++f) {
            const auto& ord = sorted[f];
            double prefix = 0.0;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                prefix += residual[ord[p]];
                const double lo = x.at(ord[p], f);
                const double hi = x.at(ord[p + 1], f);
                if (lo == hi)
                    continue;
                const double nl = static_cast<double>(p + 1);
                const double nr = static_cast<double>(n - p - 1);
                const double suffix = total - prefix;
                const double gain = prefix * prefix / nl + suffix * suffix / nr;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<std::uint32_t>(f);
                    best_threshold = 0.5 * (lo + hi);
                    best_left = prefix / nl;
                    best_right = suffix / nr;
                }
            }
        }

        Stump stump;
        if (best_gain < 0.0) {
            // Every feature constant: fall back to the residual mean on both
            // sides (zero once the base is subtracted).
            const double mean = total / static_cast<double>(n);
            stump = Stump{0, 0.0, shrinkage * mean, shrinkage * mean};
        } else {
            stump = Stump{best_feature, best_threshold, shrinkage * best_left,
                          shrinkage * best_right};
        }
        ensemble.stumps.push_back(stump);
        for (std::size_t i = 0; i < n; ++i)
            residual[i] -= x.at(i, stump.feature) <= stump.threshold ? stump.left : stump.right;
    }
    return ensemble;
}

double stump_predict_row(const StumpEnsemble& ensemble, const double* row) {
    double acc = ensemble.base;
    for (const auto& s : ensemble.stumps)
        acc += row[s.feature] <= s.threshold ? s.left : s.right;
    return acc;
}

std::vector<double> stump_predict(const StumpEnsemble& ensemble, const DataMatrix& x) {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r)
        out[r] = stump_predict_row(ensemble, x.values.data() + r * x.cols);
    return out;
}

namespace {

std::vector<double> standardize_rows(const DataMatrix& x, const std::vector<double>& mean,
                                     const std::vector<double>& scale) {
    std::vector<double> out(x.values.size());
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c)
            out[r * x.cols + c] = (x.at(r, c) - mean[c]) / scale[c];
    return out;
}

Tensor mlp_forward(const std::vector<double>& rows, std::size_t count, std::size_t cols,
                   const MlpModel& model) {
    Tensor h = Tensor::from_values({count, cols},
                                   std::vector<double>(rows.begin(), rows.begin() + count * cols),
                                   false);
    for (std::size_t l = 0; l + 1 < model.weights.size(); ++l)
        h = relu(linear(h, model.weights[l], model.biases[l]));
    return linear(h, model.weights.back(), model.biases.back());
}

} // namespace

MlpModel train_mlp_baseline(const DataMatrix& x, const std::vector<double>& y,
                            const MlpConfig& config) {
    if (x.rows < 2 || x.rows != y.size())
        throw std::invalid_argument("train_mlp_baseline: bad data shape");

    MlpModel model;
    model.input_mean.assign(x.cols, 0.0);
    model.input_scale.assign(x.cols, 1.0);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c)
            model.input_mean[c] += x.at(r, c);
    for (auto& m : model.input_mean)
        m /= static_cast<double>(x.rows);
    std::vector<double> var(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double d = x.at(r, c) - model.input_mean[c];
            var[c] += d * d;
        }
    for (std::size_t c = 0; c < x.cols; ++c)
        model.input_scale[c] = var[c] > 0.0 ? std::sqrt(var[c] / static_cast<double>(x.rows)) : 1.0;

    double ymean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double yvar = 0.0;
    for (const double t : y)
        yvar += (t - ymean) * (t - ymean);
    yvar /= static_cast<double>(y.size());
    model.target_scaler.mean = ymean;
    model.target_scaler.stddev = yvar > 0.0 ? std::sqrt(yvar) : 1.0;

    Rng rng(config.seed ^ 0x317eaf00dULL);
    std::size_t cur = x.cols;
    for (std::size_t l = 0; l < config.hidden_layers; ++l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(cur + config.width));
        std::vector<double> w(cur * config.width);
        for (auto& e : w)
            e = rng.uniform(-limit, limit);
        model.weights.push_back(Tensor::from_values({cur, config.width}, w, true));
        model.biases.push_back(Tensor::zeros({config.width}, true));
        cur = config.width;
    }
    {
        const double limit = std::sqrt(6.0 / static_cast<double>(cur + 1));
        std::vector<double> w(cur);
        for (auto& e : w)
            e = rng.uniform(-limit, limit);
        model.weights.push_back(Tensor::from_values({cur, 1}, w, true));
        model.biases.push_back(Tensor::zeros({1}, true));
    }

    std::vector<double> xs = standardize_rows(x, model.input_mean, model.input_scale);
    std::vector<double> ys(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        ys[i] = (y[i] - model.target_scaler.mean) / model.target_scaler.stddev;

    std::vector<Tensor> params;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        params.push_back(model.weights[l]);
        params.push_back(model.biases[l]);
    }
    SgdMomentumState sgd;
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> batch_x;
    std::vector<double> batch_y;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const std::size_t count = stop - start;
            batch_x.resize(count * x.cols);
            batch_y.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                std::copy(xs.data() + order[start + i] * x.cols,
                          xs.data() + (order[start + i] + 1) * x.cols,
                          batch_x.data() + i * x.cols);
                batch_y[i] = ys[order[start + i]];
            }
            Tape tape;
            TapeScope scope(tape);
            Tensor pred = mlp_forward(batch_x, count, x.cols, model);
            Tensor target = Tensor::from_values({count, 1}, batch_y, false);
            Tensor loss = mse(pred, target);
            if (!std::isfinite(loss.scalar_value()))
                throw std::runtime_error("train_mlp_baseline: diverged at epoch " +
                                         std::to_string(epoch + 1));
            backward(loss);
            sgd_momentum_step(params, sgd, config.lr, config.momentum);
        }
    }
    return model;
}

std::vector<double> mlp_predict(const MlpModel& model, const DataMatrix& x) {
    const std::vector<double> xs = standardize_rows(x, model.input_mean, model.input_scale);
    Tensor out = mlp_forward(xs, x.rows, x.cols, model);
    std::vector<double> preds(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r)
        preds[r] = model.target_scaler.mean + model.target_scaler.stddev * out.values()[r];
    return preds;
}

namespace {

std::pair<double, double> r2_nmse(const std::vector<double>& preds,
                                  const std::vector<double>& targets) {
    double mean = std::accumulate(targets.begin(), targets.end(), 0.0) /
                  static_cast<double>(targets.size());
    double sq_err = 0.0;
    double sq_dev = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        sq_err += (preds[i] - targets[i]) * (preds[i] - targets[i]);
        sq_dev += (targets[i] - mean) * (targets[i] - mean);
    }
    const double nmse = sq_dev > 0.0 ? sq_err / sq_dev : 0.0;
    return {1.0 - nmse, nmse};
}

} // namespace

BenchmarkResult benchmark_compare(const Dataset& dataset, const BenchmarkConfig& config,
                                  const std::vector<std::string>& models) {
    const auto wants = [&](const char* name) {
        return std::find(models.begin(), models.end(), name) != models.end();
    };
    for (const auto& m : models)
        if (m != "gcnn" && m != "gb_stumps" && m != "mlp")
            throw std::invalid_argument("benchmark_compare: unknown model '" + m + "'");
    if (models.empty())
        throw std::invalid_argument("benchmark_compare: no models requested");

    BenchmarkResult result;

    std::size_t min_nodes = SIZE_MAX;
    for (const auto& s : dataset.samples)
        min_nodes = std::min(min_nodes, s.graph.num_nodes());
    result.ordered_m = std::min(config.ordered_m, min_nodes);

    // All models share one split. train() derives it from the same call, so
    // the baselines see the identical validation set whether or not the
    // GCNN is in the run.
    auto [train_idx, val_idx] =
        split_indices(dataset.size(), config.gcnn.train_fraction, config.gcnn.seed);
    for (const auto i : val_idx)
        result.val_targets.push_back(dataset.samples[i].target);

    if (wants("gcnn")) {
        TrainResult gcnn = train(dataset, config.gcnn);
        BenchmarkEntry entry;
        entry.name = "gcnn";
        for (const auto i : val_idx)
            entry.predictions.push_back(predict(dataset.samples[i].graph, gcnn.params));
        std::tie(entry.r2, entry.nmse) = r2_nmse(entry.predictions, result.val_targets);
        result.entries.push_back(std::move(entry));
    }

    if (wants("gb_stumps") || wants("mlp")) {
        const OrderedFeatureMatrix train_x =
            ordered_features(dataset, result.ordered_m, train_idx);
        const OrderedFeatureMatrix val_x = ordered_features(dataset, result.ordered_m, val_idx);
        std::vector<double> train_y;
        for (const auto i : train_idx)
            train_y.push_back(dataset.samples[i].target);

        if (wants("gb_stumps")) {
            BenchmarkEntry entry;
            entry.name = "gb_stumps";
            const StumpEnsemble gb =
                train_stumps(train_x.x, train_y, config.gb_rounds, config.gb_shrinkage);
            entry.predictions = stump_predict(gb, val_x.x);
            std::tie(entry.r2, entry.nmse) = r2_nmse(entry.predictions, result.val_targets);
            result.entries.push_back(std::move(entry));
        }
        if (wants("mlp")) {
            BenchmarkEntry entry;
            entry.name = "mlp";
            const MlpModel mlp = train_mlp_baseline(train_x.x, train_y, config.mlp);
            entry.predictions = mlp_predict(mlp, val_x.x);
            std::tie(entry.r2, entry.nmse) = r2_nmse(entry.predictions, result.val_targets);
            result.entries.push_back(std::move(entry));
        }
    }
    return result;
}

BenchmarkResult benchmark_compare(const Dataset& dataset, const BenchmarkConfig& config) {
    return benchmark_compare(dataset, config, {"gcnn", "gb_stumps", "mlp"});
}

} // namespace flowgnn
