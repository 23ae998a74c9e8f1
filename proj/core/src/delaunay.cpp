#include "flowgnn/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowgnn {

namespace {

struct Tri {
    std::uint32_t a, b, c;
    double cx, cy, rr;
    bool alive = true;
};

Tri make_tri(std::uint32_t a, std::uint32_t b, std::uint32_t c,
             const std::vector<std::array<double, 2>>& pts) {
    const double ax = pts[a][0], ay = pts[a][1];
    const double bx = pts[b][0], by = pts[b][1];
    const double cx = pts[c][0], cy = pts[c][1];
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (d == 0.0)
        throw std::runtime_error("delaunay_triangulate: degenerate (collinear) triangle");
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    Tri t;
    t.a = a;
    t.b = b;
    t.c = c;
    t.cx = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    t.cy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    const double dx = ax - t.cx;
    const double dy = ay - t.cy;
    t.rr = dx * dx + dy * dy;
    return t;
}

} // namespace

std::vector<std::array<std::uint32_t, 3>>
delaunay_triangulate(const std::vector<std::array<double, 2>>& points) {
    const std::size_t n = points.size();
    if (n < 3)
        return {};

    std::vector<std::array<double, 2>> pts = points;
    double xlo = pts[0][0], xhi = xlo, ylo = pts[0][1], yhi = ylo;
    for (const auto& p : pts) {
        xlo = std::min(xlo, p[0]);
        xhi = std::max(xhi, p[0]);
        ylo = std::min(ylo, p[1]);
        yhi = std::max(yhi, p[1]);
    }
    const double span = std::max({xhi - xlo, yhi - ylo, 1.0});
    const double mx = 0.5 * (xlo + xhi);
    const double my = 0.5 * (ylo + yhi);
    const std::uint32_t s0 = static_cast<std::uint32_t>(n);
    pts.push_back({mx - 60.0 * span, my - 30.0 * span});
    pts.push_back({mx + 60.0 * span, my - 30.0 * span});
    pts.push_back({mx, my + 60.0 * span});

    std::vector<Tri> tris;
    tris.push_back(make_tri(s0, s0 + 1, s0 + 2, pts));

    std::vector<std::pair<std::uint32_t, std::uint32_t>> cavity;
    for (std::uint32_t p = 0; p < n; ++p) {
        const double px = pts[p][0];
        const double py = pts[p][1];
        cavity.clear();
        for (auto& t : tris) {
            if (!t.alive)
                continue;
            const double dx = px - t.cx;
            const double dy = py - t.cy;
            if (dx * dx + dy * dy < t.rr) {
                t.alive = false;
                cavity.emplace_back(t.a, t.b);
                cavity.emplace_back(t.b, t.c);
                cavity.emplace_back(t.c, t.a);
            }
        }
        // The cavity boundary consists of the edges appearing exactly once
        // (shared edges cancel in opposite orientations).
        std::vector<bool> keep(cavity.size(), true);
        for (std::size_t i = 0; i < cavity.size(); ++i)
            for (std::size_t j = i + 1; j < cavity.size(); ++j)
                if (keep[i] && keep[j] && cavity[i].first == cavity[j].second &&
                    cavity[i].second == cavity[j].first) {
                    keep[i] = keep[j] = false;
                    break;
                }
        for (std::size_t i = 0; i < cavity.size(); ++i)
            if (keep[i])
                tris.push_back(make_tri(cavity[i].first, cavity[i].second, p, pts));
    }

    std::vector<std::array<std::uint32_t, 3>> out;
    for (const auto& t : tris) {
        if (!t.alive || t.a >= n || t.b >= n || t.c >= n)
            continue;
        const double cross = (pts[t.b][0] - pts[t.a][0]) * (pts[t.c][1] - pts[t.a][1]) -
                             (pts[t.c][0] - pts[t.a][0]) * (pts[t.b][1] - pts[t.a][1]);
        if (cross >= 0.0)
            out.push_back({t.a, t.b, t.c});
        else
            out.push_back({t.a, t.c, t.b});
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace flowgnn
