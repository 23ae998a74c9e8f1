#include "flowgnn/linalg.hpp"

#include <cmath>
#include <cstring>

namespace flowgnn {

// Row-major i-k-j order: the inner loop streams over contiguous rows of B and
// C, which the compiler turns into FMA vector code. Shapes in this project are
// small enough (k, n <= 2048) that no cache blocking is needed.
void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
    if (!accumulate) {
        std::memset(c, 0, m * n * sizeof(double));
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double aval = arow[l];
            if (aval == 0.0) {
                continue;
            }
            const double* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aval * brow[j];
            }
        }
    }
}

void matmul_at_b_accum(const double* a, const double* b, double* c,
                       std::size_t m, std::size_t k, std::size_t n) {
    // C[i,j] += sum_l A[l,i] * B[l,j]; the l-i-j order keeps B and C row access
    // contiguous.
    for (std::size_t l = 0; l < k; ++l) {
        const double* arow = a + l * m;
        const double* brow = b + l * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double aval = arow[i];
            if (aval == 0.0) {
                continue;
            }
            double* crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aval * brow[j];
            }
        }
    }
}

void matmul_a_bt_accum(const double* a, const double* b, double* c,
                       std::size_t m, std::size_t k, std::size_t n) {
    // Transposing B first keeps the inner loop free of reduction dependencies,
    // so it vectorizes without reassociating sums. B is a weight matrix here
    // and small next to the m*k*n work.
    thread_local std::vector<double> scratch;
    scratch.resize(k * n);
    transpose(b, scratch.data(), n, k);
    matmul(a, scratch.data(), c, m, k, n, true);
}

void transpose(const double* a, double* at, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            at[j * rows + i] = a[i * cols + j];
        }
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

double l2_norm(const double* x, std::size_t n) {
    return std::sqrt(dot(x, x, n));
}

} // namespace flowgnn
