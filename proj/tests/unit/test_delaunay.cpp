#include "flowgnn/delaunay.hpp"
#include "flowgnn/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

using namespace flowgnn;

namespace {

using Point = std::array<double, 2>;
using Tri = std::array<std::uint32_t, 3>;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Signed area doubled; positive for counterclockwise triangles.
double signed_area2(const std::vector<Point>& pts, const Tri& t) {
    return cross(pts[t[0]], pts[t[1]], pts[t[2]]);
}

/// True when p lies strictly inside the circumcircle of (a, b, c), assumed
/// counterclockwise, using the standard determinant with a relative epsilon.
bool in_circumcircle(const Point& a, const Point& b, const Point& c, const Point& p) {
    const double ax = a[0] - p[0], ay = a[1] - p[1];
    const double bx = b[0] - p[0], by = b[1] - p[1];
    const double cx = c[0] - p[0], cy = c[1] - p[1];
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    const double scale = std::max({std::fabs(ax), std::fabs(ay), std::fabs(bx), std::fabs(by),
                                   std::fabs(cx), std::fabs(cy), 1e-30});
    return det > 1e-9 * scale * scale * scale * scale;
}

std::vector<Point> random_points(std::size_t n, Rng& rng) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    return pts;
}

/// Convex hull via monotone chain, returned as vertex indices.
std::vector<std::uint32_t> convex_hull(const std::vector<Point>& pts) {
    std::vector<std::uint32_t> idx(pts.size());
    for (std::uint32_t i = 0; i < pts.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return pts[a] < pts[b];
    });
    std::vector<std::uint32_t> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto i : idx) {
        while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0)
            --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[*it]) <= 0)
            --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

std::set<std::pair<std::uint32_t, std::uint32_t>> triangulation_edges(const std::vector<Tri>& tris) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& t : tris)
        for (int i = 0; i < 3; ++i) {
            const auto u = std::min(t[i], t[(i + 1) % 3]);
            const auto v = std::max(t[i], t[(i + 1) % 3]);
            edges.insert({u, v});
        }
    return edges;
}

} // namespace

TEST_CASE("the unit square triangulates into two counterclockwise triangles") {
    const std::vector<Point> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto tris = delaunay_triangulate(pts);
    REQUIRE(tris.size() == 2);
    for (const auto& t : tris)
        CHECK(signed_area2(pts, t) > 0.0);
    // Together the two triangles tile the square exactly.
    const double total = 0.5 * (signed_area2(pts, tris[0]) + signed_area2(pts, tris[1]));
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("no point falls strictly inside any circumcircle on random sets") {
    Rng rng(7);
    for (const std::size_t n : {10u, 40u, 120u}) {
        const auto pts = random_points(n, rng);
        const auto tris = delaunay_triangulate(pts);
        REQUIRE(!tris.empty());
        for (const auto& t : tris) {
            CHECK(signed_area2(pts, t) > 0.0);
            for (std::uint32_t p = 0; p < pts.size(); ++p) {
                if (p == t[0] || p == t[1] || p == t[2])
                    continue;
                CHECK_FALSE(in_circumcircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[p]));
            }
        }
    }
}

TEST_CASE("triangulated area tiles the convex hull on random sets") {
    Rng rng(13);
    const auto pts = random_points(60, rng);
    const auto tris = delaunay_triangulate(pts);
    double tri_area = 0.0;
    for (const auto& t : tris)
        tri_area += 0.5 * signed_area2(pts, t);
    const auto hull = convex_hull(pts);
    double hull_area = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = pts[hull[i]];
        const auto& b = pts[hull[(i + 1) % hull.size()]];
        hull_area += 0.5 * (a[0] * b[1] - b[0] * a[1]);
    }
    CHECK(tri_area == doctest::Approx(std::fabs(hull_area)).epsilon(1e-9));
}

TEST_CASE("every convex hull edge appears in the triangulation") {
    Rng rng(17);
    const auto pts = random_points(50, rng);
    const auto tris = delaunay_triangulate(pts);
    const auto edges = triangulation_edges(tris);
    const auto hull = convex_hull(pts);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto u = std::min(hull[i], hull[(i + 1) % hull.size()]);
        const auto v = std::max(hull[i], hull[(i + 1) % hull.size()]);
        CHECK(edges.count({u, v}) == 1);
    }
}

TEST_CASE("degenerate inputs yield no triangles") {
    CHECK(delaunay_triangulate({}).empty());
    CHECK(delaunay_triangulate({{0, 0}}).empty());
    CHECK(delaunay_triangulate({{0, 0}, {1, 1}}).empty());
    // All points on one line.
    CHECK(delaunay_triangulate({{0, 0}, {1, 1}, {2, 2}, {3, 3}}).empty());
}

TEST_CASE("triangulation output is deterministic for identical input") {
    Rng rng(23);
    const auto pts = random_points(80, rng);
    const auto a = delaunay_triangulate(pts);
    const auto b = delaunay_triangulate(pts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == b[i]);
}

TEST_CASE("triangle count matches the euler relation for the point set") {
    // triangles = 2n - b - 2, with b the vertices on the triangulation's own
    // boundary (edges incident to exactly one triangle). Holes or dropped
    // points would break the relation.
    Rng rng(29);
    const auto pts = random_points(100, rng);
    const auto tris = delaunay_triangulate(pts);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_count;
    for (const auto& t : tris)
        for (int i = 0; i < 3; ++i) {
            const auto u = std::min(t[i], t[(i + 1) % 3]);
            const auto v = std::max(t[i], t[(i + 1) % 3]);
            edge_count[{u, v}] += 1;
        }
    std::set<std::uint32_t> boundary;
    for (const auto& [edge, count] : edge_count) {
        CHECK(count <= 2);
        if (count == 1) {
            boundary.insert(edge.first);
            boundary.insert(edge.second);
        }
    }
    std::set<std::uint32_t> used;
    for (const auto& t : tris)
        used.insert(t.begin(), t.end());
    CHECK(used.size() == pts.size());
    CHECK(tris.size() == 2 * used.size() - boundary.size() - 2);
}
