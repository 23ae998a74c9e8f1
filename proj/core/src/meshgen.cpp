#include "flowgnn/meshgen.hpp"
#include "flowgnn/delaunay.hpp"
#include "flowgnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowgnn {

namespace {

double point_segment_distance(double px, double py, const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
    const double vx = b[0] - a[0];
    const double vy = b[1] - a[1];
    const double wx = px - a[0];
    const double wy = py - a[1];
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (a[0] + t * vx);
    const double dy = py - (a[1] + t * vy);
    return std::hypot(dx, dy);
}

double polyline_distance(double px, double py, const std::vector<std::array<double, 2>>& poly) {
    double best = point_segment_distance(px, py, poly.back(), poly.front());
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        best = std::min(best, point_segment_distance(px, py, poly[i], poly[i + 1]));
    return best;
}

} // namespace

MeshSample sample_mesh(const AirfoilSpec& spec, const MeshConfig& config, std::uint64_t seed) {
    if (config.min_nodes < 100 || config.max_nodes > 10000 || config.min_nodes > config.max_nodes)
        throw std::invalid_argument("sample_mesh: node band must lie within [100, 10000]");
    if (!(config.d0 > 0.0) || !(config.clearance >= 0.0))
        throw std::invalid_argument("sample_mesh: nonpositive grading parameters");

    const JoukowskiFlow flow(spec);
    const auto boundary = joukowski_boundary(spec, config.boundary_resolution);

    Rng rng(seed);
    const std::size_t target =
        config.min_nodes + rng.uniform_index(0, config.max_nodes - config.min_nodes);

    std::vector<std::array<double, 2>> points;
    points.reserve(target);
    const std::size_t budget = target * config.attempts_per_node;
    std::size_t attempts = 0;
    while (points.size() < target) {
        if (++attempts > budget)
            throw std::runtime_error("sample_mesh: node band unreachable within attempt budget");
        const double x = rng.uniform(config.x_lo, config.x_hi);
        const double y = rng.uniform(config.y_lo, config.y_hi);
        const double accept = rng.next_double();
        const double d = polyline_distance(x, y, boundary);
        if (d < config.clearance)
            continue;
        const double w = config.d0 / (d + config.d0);
        if (accept >= w * w)
            continue;
        if (flow.inside(x, y))
            continue;
        points.push_back({x, y});
    }

    const auto triangles = delaunay_triangulate(points);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(triangles.size() * 3);
    for (const auto& t : triangles) {
        const double cx = (points[t[0]][0] + points[t[1]][0] + points[t[2]][0]) / 3.0;
        const double cy = (points[t[0]][1] + points[t[1]][1] + points[t[2]][1]) / 3.0;
        if (flow.inside(cx, cy))
            continue;
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t u = t[k];
            const std::uint32_t v = t[(k + 1) % 3];
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    return MeshSample{std::move(points), std::move(edges)};
}

} // namespace flowgnn
