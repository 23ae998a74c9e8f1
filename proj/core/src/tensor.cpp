#include "flowgnn/tensor.hpp"

#include <cmath>
#include <numeric>

namespace flowgnn {

namespace {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        n *= d;
    }
    return n;
}

} // namespace

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = std::make_shared<std::vector<double>>(shape_numel(t.shape_), 0.0);
    if (requires_grad) {
        t.grad_ = std::make_shared<std::vector<double>>(t.data_->size(), 0.0);
    }
    return t;
}

Tensor Tensor::from_values(std::vector<std::size_t> shape, std::vector<double> values,
                           bool requires_grad) {
    if (shape_numel(shape) != values.size()) {
        throw std::invalid_argument("tensor value count does not match shape");
    }
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = std::make_shared<std::vector<double>>(std::move(values));
    if (requires_grad) {
        t.grad_ = std::make_shared<std::vector<double>>(t.data_->size(), 0.0);
    }
    return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
    return from_values({1}, {value}, requires_grad);
}

Tensor Tensor::vector_of(std::vector<double> values, bool requires_grad) {
    std::size_t n = values.size();
    return from_values({n}, std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                      bool requires_grad) {
    return from_values({rows, cols}, std::move(values), requires_grad);
}

std::size_t Tensor::numel() const {
    return data_ ? data_->size() : 0;
}

std::size_t Tensor::rows() const {
    return rank() == 2 ? shape_[0] : 1;
}

std::size_t Tensor::cols() const {
    if (rank() == 2) {
        return shape_[1];
    }
    return rank() == 1 ? shape_[0] : 0;
}

std::vector<double>& Tensor::values() {
    if (!data_) {
        throw std::logic_error("use of undefined tensor");
    }
    return *data_;
}

const std::vector<double>& Tensor::values() const {
    if (!data_) {
        throw std::logic_error("use of undefined tensor");
    }
    return *data_;
}

double Tensor::scalar_value() const {
    if (!is_scalar()) {
        throw std::logic_error("scalar_value() on tensor with numel != 1");
    }
    return values()[0];
}

void Tensor::set_requires_grad(bool on) {
    if (on && !grad_) {
        grad_ = std::make_shared<std::vector<double>>(numel(), 0.0);
    } else if (!on) {
        grad_.reset();
    }
}

std::vector<double>& Tensor::grad() {
    if (!grad_) {
        throw std::logic_error("tensor has no gradient buffer");
    }
    return *grad_;
}

const std::vector<double>& Tensor::grad() const {
    if (!grad_) {
        throw std::logic_error("tensor has no gradient buffer");
    }
    return *grad_;
}

void Tensor::zero_grad() {
    if (grad_) {
        std::fill(grad_->begin(), grad_->end(), 0.0);
    }
}

bool Tensor::all_finite() const {
    for (double v : values()) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
    if (shape_numel(shape) != numel()) {
        throw std::invalid_argument("reshape changes element count");
    }
    Tensor t = *this;
    t.shape_ = std::move(shape);
    return t;
}

} // namespace flowgnn
