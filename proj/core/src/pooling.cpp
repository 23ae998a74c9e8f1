#include "flowgnn/pooling.hpp"
#include "flowgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flowgnn {

TopKResult topk_pool(const Graph& g, const Tensor& h, const TopKParams& params) {
    check_shape(h.rank() == 2, "topk_pool: features must be a matrix");
    check_shape(h.rows() == g.num_nodes(), "topk_pool: feature rows vs node count");
    check_shape(params.p.numel() == h.cols(), "topk_pool: score vector length vs feature width");
    if (!(params.ratio > 0.0 && params.ratio <= 1.0))
        throw std::invalid_argument("topk_pool: ratio must be in (0,1]");
    const std::size_t n = h.rows();
    check_shape(n > 0, "topk_pool: empty graph");

    Tensor direction = vec_l2_normalize(params.p);
    Tensor scores = matvec(h, direction);

    const std::size_t m = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(params.ratio * static_cast<double>(n))));
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    const auto& y = scores.values();
    std::sort(order.begin(), order.end(), [&y](std::uint32_t a, std::uint32_t b) {
        if (y[a] != y[b])
            return y[a] > y[b];
        return a < b;
    });
    std::vector<std::uint32_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(kept.begin(), kept.end());

    Tensor gate = tanh(gather_elems(scores, kept));
    Tensor gated = scale_rows(gather_rows(h, kept), gate);
    auto [sub, old_to_new] = induced_subgraph(g, kept);
    return TopKResult{std::move(sub), std::move(gated), std::move(kept)};
}

Tensor global_mean_max(const Tensor& h) {
    return concat(reduce_mean_rows(h), reduce_max_rows(h));
}

} // namespace flowgnn
