#include "flowgnn/sage.hpp"
#include "flowgnn/autodiff.hpp"
#include "flowgnn/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace flowgnn {

Tensor self_neighbor_mean(const Graph& g, const Tensor& h) {
    check_shape(h.rank() == 2, "self_neighbor_mean: features must be a matrix");
    check_shape(h.rows() == g.num_nodes(), "self_neighbor_mean: feature rows vs node count");
    const std::size_t n = g.num_nodes();
    const std::size_t f = h.cols();

    Tensor out = detail::make_op_output({n, f}, h.requires_grad());
    const auto& hv = h.values();
    for (std::size_t v = 0; v < n; ++v) {
        double* row = out.data() + v * f;
        std::copy(hv.data() + v * f, hv.data() + (v + 1) * f, row);
        const auto nbrs = g.neighbors(static_cast<std::uint32_t>(v));
        for (const auto u : nbrs)
            axpy(1.0, hv.data() + u * f, row, f);
        const double inv = 1.0 / static_cast<double>(1 + nbrs.size());
        for (std::size_t j = 0; j < f; ++j)
            row[j] *= inv;
    }

    detail::record_backward(out, [g, h = h, out = out, n, f]() mutable {
        const auto& gy = out.grad();
        auto& gh = h.grad();
        // Aggregation is symmetric: scatter each row's scaled gradient back
        // over the same {v} union N(v) stencil.
        for (std::size_t v = 0; v < n; ++v) {
            const auto nbrs = g.neighbors(static_cast<std::uint32_t>(v));
            const double inv = 1.0 / static_cast<double>(1 + nbrs.size());
            const double* grow = gy.data() + v * f;
            double* self = gh.data() + v * f;
            for (std::size_t j = 0; j < f; ++j)
                self[j] += grow[j] * inv;
            for (const auto u : nbrs)
                axpy(inv, grow, gh.data() + u * f, f);
        }
    });
    return out;
}

Tensor sage_ring(const Graph& g, const Tensor& h, const Tensor& weight, const Tensor& bias,
                 const SageRingOptions& options) {
    Tensor mean = self_neighbor_mean(g, h);
    Tensor cat = concat_cols(h, mean);
    Tensor out = linear(cat, weight, bias);
    if (options.relu)
        out = relu(out);
    if (options.normalize)
        out = l2_normalize_rows(out);
    return out;
}

Tensor sage_block(const Graph& g, const Tensor& h, const SageBlockParams& params) {
    if (params.weights.empty() || params.weights.size() != params.biases.size())
        throw std::invalid_argument("sage_block: ring weights and biases must pair up");
    Tensor cur = h;
    for (std::size_t r = 0; r < params.rings(); ++r)
        cur = sage_ring(g, cur, params.weights[r], params.biases[r],
                        SageRingOptions{true, params.normalize});
    return cur;
}

Tensor laplacian_gcn_ring(const Graph& g, const Tensor& h, const Tensor& weight,
                          bool apply_relu) {
    check_shape(h.rank() == 2, "laplacian_gcn_ring: features must be a matrix");
    check_shape(h.rows() == g.num_nodes(), "laplacian_gcn_ring: feature rows vs node count");
    check_shape(weight.rank() == 2 && weight.shape()[0] == h.cols(),
                "laplacian_gcn_ring: weight rows vs feature width");
    const std::size_t n = g.num_nodes();
    const std::size_t f = h.cols();
    const std::size_t fo = weight.shape()[1];

    // Self-loops included: effective degree is deg(v)+1.
    std::vector<double> agg(n * f, 0.0);
    const auto& hv = h.values();
    for (std::size_t v = 0; v < n; ++v) {
        const double dv = std::sqrt(static_cast<double>(g.neighbors(v).size() + 1));
        double* row = agg.data() + v * f;
        axpy(1.0 / (dv * dv), hv.data() + v * f, row, f);
        for (const auto u : g.neighbors(static_cast<std::uint32_t>(v))) {
            const double du = std::sqrt(static_cast<double>(g.neighbors(u).size() + 1));
            axpy(1.0 / (dv * du), hv.data() + u * f, row, f);
        }
    }

    Tensor out = Tensor::zeros({n, fo}, false);
    matmul(agg.data(), weight.values().data(), out.data(), n, f, fo);
    if (apply_relu)
        for (auto& x : out.values())
            x = x > 0.0 ? x : 0.0;
    return out;
}

} // namespace flowgnn
