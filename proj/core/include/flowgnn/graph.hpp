#pragma once

#include "flowgnn/tensor.hpp"

#include <cstdint>
#include <span>
#include <utility>

namespace flowgnn {

/// Undirected graph over mesh nodes. Edges are stored as directed pairs with
/// both directions present exactly once each, sorted lexicographically, so
/// equal graphs compare bit-exact. Immutable after construction; safe to
/// share across threads read-only.
class Graph {
public:
    Graph() = default;

    std::size_t num_nodes() const { return num_nodes_; }
    /// Count of directed entries (2x the undirected edge count).
    std::size_t num_directed_edges() const { return neighbors_.size(); }
    std::size_t num_undirected_edges() const { return neighbors_.size() / 2; }

    /// Node features, [n x f], no gradient buffer.
    const Tensor& features() const { return features_; }
    std::size_t feature_width() const { return features_.cols(); }

    bool has_positions() const { return !positions_.empty(); }
    /// Flattened (x,y) per node when present.
    const std::vector<double>& positions() const { return positions_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    /// Canonical directed edge list, lexicographic order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_edges() const;

    /// Internal constructor: `directed` must already hold both directions of
    /// every edge, without duplicates or self-loops. build_graph validates
    /// arbitrary input and should be used everywhere else.
    static Graph from_directed(Tensor features, std::vector<double> positions,
                               std::vector<std::pair<std::uint32_t, std::uint32_t>> directed);

private:
    std::size_t num_nodes_ = 0;
    Tensor features_;
    std::vector<double> positions_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
};

/// Bijection on [0, n); map()[old] = new.
class Permutation {
public:
    explicit Permutation(std::vector<std::uint32_t> mapping);
    static Permutation identity(std::size_t n);

    const std::vector<std::uint32_t>& map() const { return map_; }
    std::size_t size() const { return map_.size(); }
    Permutation inverse() const;

private:
    std::vector<std::uint32_t> map_;
};

/// Validates and canonicalizes: indices in range, no self-loops, no duplicate
/// directed edges (reported with their input position), symmetric closure
/// applied, features finite.
Graph build_graph(const Tensor& features,
                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                  const std::vector<double>& positions = {});

/// Relabels nodes: node p(i) of the output carries node i's features.
Graph permute(const Graph& g, const Permutation& p);

/// Sorted list of nodes reachable from v in at most k edges, v included.
std::vector<std::uint32_t> k_hop_neighbors(const Graph& g, std::uint32_t v, std::uint32_t k);

/// Directed edges leaving v.
std::size_t degree(const Graph& g, std::uint32_t v);

/// Subgraph on `keep` (distinct, valid), reindexed densely in keep order.
/// Second result maps old index to new, -1 for dropped nodes.
std::pair<Graph, std::vector<std::int32_t>>
induced_subgraph(const Graph& g, const std::vector<std::uint32_t>& keep);

} // namespace flowgnn
