#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace flowgnn {

/// Bowyer-Watson Delaunay triangulation of a 2D point set. Returns index
/// triples, each counterclockwise. Incremental with a full circumcircle scan
/// per insertion (O(n^2)), plenty at mesh scale. Fewer than 3 points or an
/// all-collinear set yield no triangles.
std::vector<std::array<std::uint32_t, 3>>
delaunay_triangulate(const std::vector<std::array<double, 2>>& points);

} // namespace flowgnn
