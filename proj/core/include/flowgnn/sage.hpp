#pragma once

#include "flowgnn/graph.hpp"
#include "flowgnn/tensor.hpp"

namespace flowgnn {

struct SageRingOptions {
    bool relu = true;
    bool normalize = false;
};

/// Row v of the result is the mean of h over {v} union neighbors(v).
/// Differentiable in h.
Tensor self_neighbor_mean(const Graph& g, const Tensor& h);

/// One aggregation ring: h'_v = relu(W [h_v || mean_{u in {v} u N(v)} h_u] + bias),
/// optionally followed by per-row L2 normalization (zero rows untouched).
/// weight is [2*f_in x f_out].
Tensor sage_ring(const Graph& g, const Tensor& h, const Tensor& weight, const Tensor& bias,
                 const SageRingOptions& options = {});

/// Weights for K sequential rings; ring r maps f_in_r to f_out_r with a
/// [2*f_in_r x f_out_r] matrix, so output widths chain.
struct SageBlockParams {
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;
    bool normalize = false;

    std::size_t rings() const { return weights.size(); }
};

/// K sequential sage_ring applications; each output embedding depends on the
/// K-hop neighborhood.
Tensor sage_block(const Graph& g, const Tensor& h, const SageBlockParams& params);

/// Symmetric-normalized convolution with implicit self-loops:
/// h'_v = relu(sum_w A~_vw h_w / sqrt((deg v + 1)(deg w + 1)) W).
/// Reference variant for cross-checking only; forward pass only, no tape.
Tensor laplacian_gcn_ring(const Graph& g, const Tensor& h, const Tensor& weight,
                          bool apply_relu = true);

} // namespace flowgnn
