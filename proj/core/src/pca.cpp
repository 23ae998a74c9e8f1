#include "flowgnn/pca.hpp"
#include "flowgnn/linalg.hpp"
#include "flowgnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowgnn {

namespace {

/// y = X_c^T (X_c v) / (rows - 1) without forming the covariance.
void cov_apply(const std::vector<double>& centered, std::size_t rows, std::size_t cols,
               const std::vector<double>& v, std::vector<double>& tmp, std::vector<double>& out) {
    tmp.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        tmp[r] = dot(centered.data() + r * cols, v.data(), cols);
    out.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        axpy(tmp[r], centered.data() + r * cols, out.data(), cols);
    const double inv = 1.0 / static_cast<double>(rows - 1);
    for (auto& x : out)
        x *= inv;
}

void orthogonalize(std::vector<double>& v, const std::vector<double>& basis, std::size_t found,
                   std::size_t cols) {
    for (std::size_t b = 0; b < found; ++b) {
        const double proj = dot(v.data(), basis.data() + b * cols, cols);
        axpy(-proj, basis.data() + b * cols, v.data(), cols);
    }
}

} // namespace

PcaResult pca(const DataMatrix& x, std::size_t k) {
    if (x.rows < 2)
        throw std::invalid_argument("pca: need at least 2 rows");
    if (k == 0 || k > x.cols)
        throw std::invalid_argument("pca: component count must be in [1, cols]");

    PcaResult result;
    result.k = k;
    result.dims = x.cols;
    result.column_means.assign(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r)
        axpy(1.0, x.values.data() + r * x.cols, result.column_means.data(), x.cols);
    for (auto& m : result.column_means)
        m /= static_cast<double>(x.rows);

    std::vector<double> centered(x.values);
    for (std::size_t r = 0; r < x.rows; ++r)
        axpy(-1.0, result.column_means.data(), centered.data() + r * x.cols, x.cols);

    double trace = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c)
            trace += centered[r * x.cols + c] * centered[r * x.cols + c];
    trace /= static_cast<double>(x.rows - 1);

    result.components.assign(k * x.cols, 0.0);
    result.eigenvalues.assign(k, 0.0);
    Rng rng(0x9c0ffee1ULL);
    std::vector<double> v(x.cols), next, tmp;
    for (std::size_t comp = 0; comp < k; ++comp) {
        for (auto& e : v)
            e = rng.normal();
        orthogonalize(v, result.components, comp, x.cols);
        double norm = l2_norm(v.data(), x.cols);
        if (norm == 0.0) {
            v.assign(x.cols, 0.0);
            v[comp % x.cols] = 1.0;
            orthogonalize(v, result.components, comp, x.cols);
            norm = l2_norm(v.data(), x.cols);
        }
        for (auto& e : v)
            e /= norm;

        double lambda = 0.0;
        for (int iter = 0; iter < 2000; ++iter) {
            cov_apply(centered, x.rows, x.cols, v, tmp, next);
            orthogonalize(next, result.components, comp, x.cols);
            const double next_norm = l2_norm(next.data(), x.cols);
            if (next_norm <= 1e-300) {
                // Remaining variance is zero; keep the current orthonormal v.
                lambda = 0.0;
                break;
            }
            for (auto& e : next)
                e /= next_norm;
            v = next;
            cov_apply(centered, x.rows, x.cols, v, tmp, next);
            const double new_lambda = dot(v.data(), next.data(), x.cols);
            if (std::abs(new_lambda - lambda) <= 1e-14 * std::max(1.0, std::abs(new_lambda)) &&
                iter > 2) {
                lambda = new_lambda;
                break;
            }
            lambda = new_lambda;
        }
        std::copy(v.begin(), v.end(), result.components.begin() + comp * x.cols);
        result.eigenvalues[comp] = lambda;
    }

    result.explained_ratio.assign(k, 0.0);
    if (trace > 0.0)
        for (std::size_t i = 0; i < k; ++i)
            result.explained_ratio[i] = result.eigenvalues[i] / trace;

    result.projections.assign(x.rows * k, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < k; ++c)
            result.projections[r * k + c] =
                dot(centered.data() + r * x.cols, result.components.data() + c * x.cols, x.cols);
    return result;
}

} // namespace flowgnn
