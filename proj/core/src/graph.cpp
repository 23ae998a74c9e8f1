#include "flowgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace flowgnn {

std::vector<std::pair<std::uint32_t, std::uint32_t>> Graph::directed_edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(neighbors_.size());
    for (std::uint32_t v = 0; v + 1 < offsets_.size(); ++v)
        for (std::uint32_t i = offsets_[v]; i < offsets_[v + 1]; ++i)
            out.emplace_back(v, neighbors_[i]);
    return out;
}

Graph Graph::from_directed(Tensor features, std::vector<double> positions,
                           std::vector<std::pair<std::uint32_t, std::uint32_t>> directed) {
    Graph g;
    g.num_nodes_ = features.rows();
    g.features_ = std::move(features);
    g.positions_ = std::move(positions);

    std::sort(directed.begin(), directed.end());
    g.offsets_.assign(g.num_nodes_ + 1, 0);
    g.neighbors_.resize(directed.size());
    for (std::size_t i = 0; i < directed.size(); ++i) {
        g.offsets_[directed[i].first + 1] += 1;
        g.neighbors_[i] = directed[i].second;
    }
    for (std::size_t v = 0; v < g.num_nodes_; ++v)
        g.offsets_[v + 1] += g.offsets_[v];
    return g;
}

Permutation::Permutation(std::vector<std::uint32_t> mapping) : map_(std::move(mapping)) {
    std::vector<bool> seen(map_.size(), false);
    for (const auto m : map_) {
        if (m >= map_.size() || seen[m])
            throw std::invalid_argument("permutation mapping is not a bijection");
        seen[m] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::uint32_t> map(n);
    std::iota(map.begin(), map.end(), 0u);
    return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> inv(map_.size());
    for (std::uint32_t i = 0; i < map_.size(); ++i)
        inv[map_[i]] = i;
    return Permutation(std::move(inv));
}

Graph build_graph(const Tensor& features,
                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                  const std::vector<double>& positions) {
    check_shape(features.defined() && features.rank() == 2, "build_graph: features must be [n x f]");
    const std::size_t n = features.rows();
    check_shape(n > 0, "build_graph: empty feature matrix");
    if (!positions.empty() && positions.size() != 2 * n)
        throw std::invalid_argument("build_graph: positions length must be 2*num_nodes");

    for (std::size_t i = 0; i < features.numel(); ++i)
        if (!std::isfinite(features.values()[i]))
            throw std::invalid_argument("build_graph: non-finite feature at node " +
                                        std::to_string(i / features.cols()));

    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [u, v] = edges[i];
        if (u >= n || v >= n)
            throw std::invalid_argument("build_graph: edge index out of range at input edge " +
                                        std::to_string(i));
        if (u == v)
            throw std::invalid_argument("build_graph: self-loop at input edge " + std::to_string(i));
    }
    // Duplicates are judged after canonicalization, so (u,v) and (v,u) name
    // the same edge. They are input errors, not silently collapsed: report
    // the later occurrence's position.
    {
        std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::size_t>> tagged;
        tagged.reserve(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto [u, v] = edges[i];
            if (u > v)
                std::swap(u, v);
            tagged.emplace_back(std::pair{u, v}, i);
        }
        std::sort(tagged.begin(), tagged.end());
        for (std::size_t i = 1; i < tagged.size(); ++i)
            if (tagged[i].first == tagged[i - 1].first)
                throw std::invalid_argument("build_graph: duplicate edge at input edge " +
                                            std::to_string(std::max(tagged[i].second,
                                                                    tagged[i - 1].second)));
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> directed;
    directed.reserve(edges.size() * 2);
    for (const auto [u, v] : edges) {
        directed.push_back({u, v});
        directed.push_back({v, u});
    }

    Tensor feat = Tensor::from_values(features.shape(), features.values(), false);
    return Graph::from_directed(std::move(feat), positions, std::move(directed));
}

Graph permute(const Graph& g, const Permutation& p) {
    if (p.size() != g.num_nodes())
        throw std::invalid_argument("permute: permutation size does not match node count");
    const std::size_t n = g.num_nodes();
    const std::size_t f = g.feature_width();
    const auto& map = p.map();

    std::vector<double> feat(n * f);
    for (std::size_t u = 0; u < n; ++u)
        std::copy(g.features().values().data() + u * f, g.features().values().data() + (u + 1) * f,
                  feat.data() + map[u] * f);

    std::vector<double> pos;
    if (g.has_positions()) {
        pos.resize(2 * n);
        for (std::size_t u = 0; u < n; ++u) {
            pos[2 * map[u]] = g.positions()[2 * u];
            pos[2 * map[u] + 1] = g.positions()[2 * u + 1];
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> directed;
    directed.reserve(g.num_directed_edges());
    for (const auto [u, v] : g.directed_edges())
        directed.emplace_back(map[u], map[v]);

    return Graph::from_directed(Tensor::from_values({n, f}, feat, false), std::move(pos),
                                std::move(directed));
}

std::vector<std::uint32_t> k_hop_neighbors(const Graph& g, std::uint32_t v, std::uint32_t k) {
    if (v >= g.num_nodes())
        throw std::invalid_argument("k_hop_neighbors: node index out of range");
    std::vector<std::uint32_t> dist(g.num_nodes(), UINT32_MAX);
    std::vector<std::uint32_t> frontier{v};
    dist[v] = 0;
    for (std::uint32_t hop = 0; hop < k && !frontier.empty(); ++hop) {
        std::vector<std::uint32_t> next;
        for (const auto u : frontier)
            for (const auto w : g.neighbors(u))
                if (dist[w] == UINT32_MAX) {
                    dist[w] = hop + 1;
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
        if (dist[u] != UINT32_MAX)
            out.push_back(u);
    return out;
}

std::size_t degree(const Graph& g, std::uint32_t v) {
    if (v >= g.num_nodes())
        throw std::invalid_argument("degree: node index out of range");
    return g.neighbors(v).size();
}

std::pair<Graph, std::vector<std::int32_t>>
induced_subgraph(const Graph& g, const std::vector<std::uint32_t>& keep) {
    if (keep.empty())
        throw std::invalid_argument("induced_subgraph: empty keep list");
    const std::size_t n = g.num_nodes();
    std::vector<std::int32_t> old_to_new(n, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= n)
            throw std::invalid_argument("induced_subgraph: keep index out of range");
        if (old_to_new[keep[i]] != -1)
            throw std::invalid_argument("induced_subgraph: duplicate keep index");
        old_to_new[keep[i]] = static_cast<std::int32_t>(i);
    }

    const std::size_t f = g.feature_width();
    std::vector<double> feat(keep.size() * f);
    for (std::size_t i = 0; i < keep.size(); ++i)
        std::copy(g.features().values().data() + keep[i] * f,
                  g.features().values().data() + (keep[i] + 1) * f, feat.data() + i * f);

    std::vector<double> pos;
    if (g.has_positions()) {
        pos.resize(2 * keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            pos[2 * i] = g.positions()[2 * keep[i]];
            pos[2 * i + 1] = g.positions()[2 * keep[i] + 1];
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> directed;
    for (const auto old_u : keep)
        for (const auto old_v : g.neighbors(old_u))
            if (old_to_new[old_v] != -1)
                directed.emplace_back(static_cast<std::uint32_t>(old_to_new[old_u]),
                                      static_cast<std::uint32_t>(old_to_new[old_v]));

    Graph sub = Graph::from_directed(Tensor::from_values({keep.size(), f}, feat, false),
                                     std::move(pos), std::move(directed));
    return {std::move(sub), std::move(old_to_new)};
}

} // namespace flowgnn
