#pragma once

#include "flowgnn/graph.hpp"
#include "flowgnn/tensor.hpp"

namespace flowgnn {

/// Learned score projection for top-k selection. ratio in (0,1].
struct TopKParams {
    Tensor p;
    double ratio = 0.5;
};

struct TopKResult {
    Graph graph;
    Tensor features;
    /// Kept original node indices, ascending.
    std::vector<std::uint32_t> kept;
};

/// Scores y = H p/||p||, keeps the ceil(ratio*n) highest (ties to the lower
/// index), gates kept rows by tanh(y) and induces the subgraph. Rejects an
/// all-zero p (the scorer could never train).
TopKResult topk_pool(const Graph& g, const Tensor& h, const TopKParams& params);

/// concat(column means, column maxes): [n x f] -> [2f], order-invariant.
Tensor global_mean_max(const Tensor& h);

} // namespace flowgnn
