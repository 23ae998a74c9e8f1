#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowgnn {

class Tape;

/// Dense 64-bit tensor handle. Copies share storage; shapes are rank 1 or 2.
/// A tensor participates in reverse-mode differentiation when it carries a
/// gradient buffer (leaf parameters) or was produced by an op while a Tape
/// was active (intermediates).
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape, bool requires_grad = false);
    static Tensor from_values(std::vector<std::size_t> shape, std::vector<double> values,
                              bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);
    static Tensor vector_of(std::vector<double> values, bool requires_grad = false);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                         bool requires_grad = false);

    bool defined() const { return data_ != nullptr; }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t numel() const;
    bool is_scalar() const { return numel() == 1; }

    /// Row/column counts; a rank-1 tensor is treated as a single row.
    std::size_t rows() const;
    std::size_t cols() const;

    std::vector<double>& values();
    const std::vector<double>& values() const;
    double* data() { return values().data(); }
    const double* data() const { return values().data(); }
    double scalar_value() const;

    bool requires_grad() const { return grad_ != nullptr; }
    void set_requires_grad(bool on);
    std::vector<double>& grad();
    const std::vector<double>& grad() const;
    void zero_grad();

    /// True when every stored value is finite.
    bool all_finite() const;

    /// View with identical storage (data and grad) under a new shape.
    Tensor reshaped(std::vector<std::size_t> shape) const;

    // Autodiff bookkeeping, managed by the ops in autodiff.hpp.
    Tape* tape() const { return tape_; }
    int node() const { return node_; }
    void bind_node(Tape* tape, int node) { tape_ = tape; node_ = node; }
    std::shared_ptr<std::vector<double>> grad_buffer() const { return grad_; }

private:
    std::vector<std::size_t> shape_;
    std::shared_ptr<std::vector<double>> data_;
    std::shared_ptr<std::vector<double>> grad_;
    Tape* tape_ = nullptr;
    int node_ = -1;
};

inline void check_shape(bool cond, const std::string& what) {
    if (!cond) {
        throw std::invalid_argument("shape mismatch: " + what);
    }
}

} // namespace flowgnn
