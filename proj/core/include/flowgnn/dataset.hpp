#pragma once

#include "flowgnn/airfoil.hpp"
#include "flowgnn/graph.hpp"
#include "flowgnn/meshgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flowgnn {

/// Uniform sampling ranges for airfoil parameters.
struct SpecRanges {
    double mu_x_lo = -0.18;
    double mu_x_hi = -0.04;
    double mu_y_lo = 0.0;
    double mu_y_hi = 0.12;
    double alpha_lo = -10.0;
    double alpha_hi = 10.0;
    double u_inf = 1.5;
    double rho = 1.0;
};

struct GenConfig {
    std::size_t count = 1000;
    SpecRanges ranges;
    MeshConfig mesh;
    std::uint64_t seed = 1;
    /// Worker threads for sample generation; samples are independent and
    /// assembled in index order, so any value is deterministic.
    std::size_t threads = 1;
};

/// One regression sample: node velocities on a mesh graph, exact lift target.
struct FlowSample {
    Graph graph;
    double target = 0.0;
    AirfoilSpec spec;
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<FlowSample> samples;
    GenConfig config;

    std::size_t size() const { return samples.size(); }
    std::vector<double> targets() const;
};

/// Generates `config.count` samples: spec drawn uniformly from the ranges,
/// mesh from sample_mesh, features = potential-flow velocity at each node,
/// target = exact lift. Failures carry the sample index. Deterministic per
/// seed for any thread count.
Dataset generate_dataset(const GenConfig& config);

} // namespace flowgnn
