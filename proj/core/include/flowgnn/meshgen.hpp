#pragma once

#include "flowgnn/airfoil.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace flowgnn {

/// Graded point-cloud mesh parameters. Defaults are tuned so the default
/// node band yields Delaunay meshes with 3000-4000 undirected edges and mean
/// degree near 6; widen the band explicitly for other experiments.
struct MeshConfig {
    std::size_t min_nodes = 1050;
    std::size_t max_nodes = 1300;
    /// Grading scale: acceptance weight (d0/(d+d0))^2 against distance to
    /// the profile, putting a solid majority of nodes within one chord.
    double d0 = 0.25;
    /// Minimum clearance between a node and the profile surface (chords).
    double clearance = 0.004;
    /// Domain in chord units; the profile spans x in [0,1], y near 0.
    double x_lo = -3.5;
    double x_hi = 6.5;
    double y_lo = -5.0;
    double y_hi = 5.0;
    /// Rejection-sampling budget per requested node.
    std::size_t attempts_per_node = 4000;
    /// Segments in the boundary polyline used for distance queries.
    std::size_t boundary_resolution = 512;
};

struct MeshSample {
    std::vector<std::array<double, 2>> points;
    /// Undirected edges, u < v, sorted.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// Graded random mesh around the airfoil: rejection-sampled points (denser
/// near the surface), Delaunay connectivity, triangles whose centroid falls
/// inside the profile removed. Node count drawn uniformly from the config
/// band. Deterministic per seed.
MeshSample sample_mesh(const AirfoilSpec& spec, const MeshConfig& config, std::uint64_t seed);

} // namespace flowgnn
