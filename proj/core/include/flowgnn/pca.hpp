#pragma once

#include <cstdint>
#include <vector>

namespace flowgnn {

/// Dense row-major sample matrix shared by the analysis tooling.
struct DataMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct PcaResult {
    std::size_t k = 0;
    std::size_t dims = 0;
    /// Orthonormal component rows, [k x dims], by descending variance.
    std::vector<double> components;
    /// Eigenvalues of the covariance, descending.
    std::vector<double> eigenvalues;
    /// Eigenvalue over total variance (covariance trace).
    std::vector<double> explained_ratio;
    /// Mean-centered data projected on the components, [rows x k].
    std::vector<double> projections;
    std::vector<double> column_means;
};

/// Principal components via deflated power iteration on the implicit
/// covariance (never materialized). Needs rows >= 2, k <= cols.
PcaResult pca(const DataMatrix& x, std::size_t k);

} // namespace flowgnn
