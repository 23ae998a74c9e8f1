#pragma once

#include <cstddef>
#include <vector>

namespace flowgnn {

/// C [m x n] = A [m x k] * B [k x n], row-major. Accumulates into C when
/// `accumulate` is set, otherwise overwrites.
void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);

/// C [m x n] += A^T [m x k] * B [k x n] where A is stored as [k x m].
void matmul_at_b_accum(const double* a, const double* b, double* c,
                       std::size_t m, std::size_t k, std::size_t n);

/// C [m x n] += A [m x k] * B^T [k x n] where B is stored as [n x k].
void matmul_a_bt_accum(const double* a, const double* b, double* c,
                       std::size_t m, std::size_t k, std::size_t n);

void transpose(const double* a, double* at, std::size_t rows, std::size_t cols);

double dot(const double* a, const double* b, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

double l2_norm(const double* x, std::size_t n);

} // namespace flowgnn
