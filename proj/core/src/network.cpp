#include "flowgnn/network.hpp"
#include "flowgnn/autodiff.hpp"
#include "flowgnn/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace flowgnn {

std::vector<Tensor> ModelParams::parameters() {
    std::vector<Tensor> out;
    for (auto* block : {&block1, &block2}) {
        for (std::size_t r = 0; r < block->rings(); ++r) {
            out.push_back(block->weights[r]);
            out.push_back(block->biases[r]);
        }
        out.push_back(block == &block1 ? pool1.p : pool2.p);
    }
    for (std::size_t i = 0; i < fc_weights.size(); ++i) {
        out.push_back(fc_weights[i]);
        out.push_back(fc_biases[i]);
    }
    return out;
}

namespace {

Tensor glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::vector<double> w(fan_in * fan_out);
    for (auto& x : w)
        x = rng.uniform(-limit, limit);
    return Tensor::from_values({fan_in, fan_out}, w, true);
}

TopKParams make_pool(std::size_t width, double ratio, Rng& rng) {
    std::vector<double> p(width);
    double norm = 0.0;
    for (auto& x : p) {
        x = rng.normal();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : p)
        x /= norm;
    return TopKParams{Tensor::from_values({width}, p, true), ratio};
}

SageBlockParams make_block(std::size_t in_width, std::size_t out_width, std::size_t rings,
                           bool normalize, Rng& rng) {
    SageBlockParams block;
    block.normalize = normalize;
    std::size_t cur = in_width;
    for (std::size_t r = 0; r < rings; ++r) {
        block.weights.push_back(glorot(2 * cur, out_width, rng));
        block.biases.push_back(Tensor::zeros({out_width}, true));
        cur = out_width;
    }
    return block;
}

} // namespace

ModelParams init_model(const ModelConfig& config, std::uint64_t seed) {
    if (config.in_width == 0 || config.conv_width == 0 || config.rings == 0)
        throw std::invalid_argument("init_model: zero width or ring count");
    if (!(config.pool_ratio > 0.0 && config.pool_ratio <= 1.0))
        throw std::invalid_argument("init_model: pool ratio must be in (0,1]");

    Rng rng(seed);
    ModelParams params;
    params.config = config;
    params.block1 = make_block(config.in_width, config.conv_width, config.rings,
                               config.sage_normalize, rng);
    params.pool1 = make_pool(config.conv_width, config.pool_ratio, rng);
    params.block2 = make_block(config.conv_width, config.conv_width, config.rings,
                               config.sage_normalize, rng);
    params.pool2 = make_pool(config.conv_width, config.pool_ratio, rng);

    std::size_t cur = 2 * config.conv_width;
    for (const std::size_t width : config.fc_widths) {
        params.fc_weights.push_back(glorot(cur, width, rng));
        params.fc_biases.push_back(Tensor::zeros({width}, true));
        cur = width;
    }
    params.fc_weights.push_back(glorot(cur, 1, rng));
    params.fc_biases.push_back(Tensor::zeros({1}, true));
    return params;
}

Tensor embed(const Graph& g, ModelParams& params) {
    if (g.num_nodes() == 0)
        throw std::invalid_argument("embed: empty graph");
    check_shape(g.feature_width() == params.config.in_width,
                "embed: graph feature width vs model input width");

    Tensor h1 = sage_block(g, g.features(), params.block1);
    TopKResult p1 = topk_pool(g, h1, params.pool1);
    Tensor r1 = global_mean_max(p1.features);

    Tensor h2 = sage_block(p1.graph, p1.features, params.block2);
    TopKResult p2 = topk_pool(p1.graph, h2, params.pool2);
    Tensor r2 = global_mean_max(p2.features);

    return params.config.skip_connection ? add(r1, r2) : r2;
}

Tensor forward(const Graph& g, ModelParams& params) {
    Tensor h = embed(g, params);
    const std::size_t hidden = params.fc_weights.size() - 1;
    for (std::size_t i = 0; i < hidden; ++i)
        h = relu(linear(h, params.fc_weights[i], params.fc_biases[i]));
    return linear(h, params.fc_weights[hidden], params.fc_biases[hidden]);
}

double predict(const Graph& g, ModelParams& params) {
    const double raw = forward(g, params).scalar_value();
    return params.scaler.mean + params.scaler.stddev * raw;
}

} // namespace flowgnn
