#include "flowgnn/meshgen.hpp"
#include "flowgnn/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace flowgnn;

TEST_CASE("mesh generation is deterministic per seed and varies across seeds") {
    AirfoilSpec spec;
    MeshConfig config;
    config.min_nodes = 300;
    config.max_nodes = 400;
    const MeshSample a = sample_mesh(spec, config, 42);
    const MeshSample b = sample_mesh(spec, config, 42);
    CHECK(a.points == b.points);
    CHECK(a.edges == b.edges);
    const MeshSample c = sample_mesh(spec, config, 43);
    CHECK(a.points != c.points);
}

TEST_CASE("node counts stay inside the configured band") {
    AirfoilSpec spec;
    MeshConfig config;
    config.min_nodes = 500;
    config.max_nodes = 620;
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const MeshSample m = sample_mesh(spec, config, seed);
        CHECK(m.points.size() >= 500);
        CHECK(m.points.size() <= 620);
    }
}

TEST_CASE("no node violates the surface clearance or lands inside the profile") {
    AirfoilSpec spec;
    spec.mu_x = -0.15;
    spec.mu_y = 0.08;
    spec.alpha_deg = 5.0;
    MeshConfig config;
    config.min_nodes = 400;
    config.max_nodes = 500;
    const MeshSample m = sample_mesh(spec, config, 7);
    JoukowskiFlow flow(spec);
    const auto poly = joukowski_boundary(spec, 1024);
    for (const auto& p : m.points) {
        CHECK_FALSE(flow.inside(p[0], p[1]));
        CHECK(oracle::polyline_distance(poly, p[0], p[1]) >= config.clearance * 0.5);
    }
}

TEST_CASE("grading places at least half the nodes within one chord of the surface") {
    AirfoilSpec spec;
    MeshConfig config;
    for (const std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const MeshSample m = sample_mesh(spec, config, seed);
        const auto poly = joukowski_boundary(spec, 1024);
        std::size_t close = 0;
        for (const auto& p : m.points)
            if (oracle::polyline_distance(poly, p[0], p[1]) <= 1.0)
                ++close;
        CHECK(static_cast<double>(close) >= 0.5 * static_cast<double>(m.points.size()));
    }
}

TEST_CASE("edges are canonical and reference valid nodes") {
    AirfoilSpec spec;
    MeshConfig config;
    config.min_nodes = 350;
    config.max_nodes = 450;
    const MeshSample m = sample_mesh(spec, config, 19);
    CHECK(std::is_sorted(m.edges.begin(), m.edges.end()));
    CHECK(std::adjacent_find(m.edges.begin(), m.edges.end()) == m.edges.end());
    for (const auto& [u, v] : m.edges) {
        CHECK(u < v);
        CHECK(v < m.points.size());
    }
}

TEST_CASE("the default band produces meshes with three to four thousand edges") {
    AirfoilSpec spec;
    spec.mu_x = -0.1;
    spec.mu_y = 0.05;
    spec.alpha_deg = 3.0;
    MeshConfig config;
    for (const std::uint64_t seed : {5ull, 6ull}) {
        const MeshSample m = sample_mesh(spec, config, seed);
        CHECK(m.edges.size() >= 3000);
        CHECK(m.edges.size() <= 4000);
        const double mean_degree =
            2.0 * static_cast<double>(m.edges.size()) / static_cast<double>(m.points.size());
        CHECK(mean_degree >= 4.0);
        CHECK(mean_degree <= 7.0);
    }
}

TEST_CASE("mesh nodes remain inside the configured domain box") {
    AirfoilSpec spec;
    MeshConfig config;
    config.min_nodes = 300;
    config.max_nodes = 380;
    const MeshSample m = sample_mesh(spec, config, 23);
    for (const auto& p : m.points) {
        CHECK(p[0] >= config.x_lo);
        CHECK(p[0] <= config.x_hi);
        CHECK(p[1] >= config.y_lo);
        CHECK(p[1] <= config.y_hi);
    }
}

TEST_CASE("node band validation rejects inverted or out-of-range bands") {
    AirfoilSpec spec;
    MeshConfig config;
    config.min_nodes = 50;
    config.max_nodes = 80;
    CHECK_THROWS_AS(sample_mesh(spec, config, 1), std::invalid_argument);
    config.min_nodes = 500;
    config.max_nodes = 400;
    CHECK_THROWS_AS(sample_mesh(spec, config, 1), std::invalid_argument);
    config.min_nodes = 20000;
    config.max_nodes = 30000;
    CHECK_THROWS_AS(sample_mesh(spec, config, 1), std::invalid_argument);
}
