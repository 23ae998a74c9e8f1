#pragma once

#include "flowgnn/tensor.hpp"

#include <cstdint>
#include <functional>

namespace flowgnn {

/// Reverse-mode tape over whole-tensor ops. Ops record themselves on the
/// thread's active tape (see TapeScope) whenever an input carries a gradient;
/// without an active tape they evaluate forward only. A tape is confined to
/// one thread.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    int record(std::shared_ptr<std::vector<double>> out_grad, std::function<void()> backward);

    /// Zeroes intermediate gradients, seeds the node's gradient with 1 and
    /// replays recorded ops in reverse. Leaf gradients accumulate.
    void run_backward(int from_node);

    void clear();
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        std::function<void()> backward;
        std::shared_ptr<std::vector<double>> out_grad;
    };
    std::vector<Node> nodes_;
};

/// RAII guard making `tape` the active tape for the current thread.
class TapeScope {
public:
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

private:
    Tape* previous_;
};

Tape* active_tape();

/// d(loss)/d(leaf) accumulated into every reachable leaf's grad buffer.
/// Repeated calls without zeroing accumulate. Throws on non-scalar loss.
void backward(Tensor& loss);

// --- differentiable ops ---

/// x [n x a] * W [a x b] + bias [b]. A rank-1 x is treated as a single row.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);
Tensor relu(const Tensor& x);
Tensor tanh(const Tensor& x);
/// Column-wise mean / max over rows, [n x f] -> [f]. Max routes its gradient
/// to the first argmax row (ties break to the lowest index).
Tensor reduce_mean_rows(const Tensor& x);
Tensor reduce_max_rows(const Tensor& x);
Tensor concat(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
/// Rows scaled to unit L2 norm; all-zero rows pass through unchanged.
Tensor l2_normalize_rows(const Tensor& x);
Tensor mse(const Tensor& pred, const Tensor& target);
Tensor sum(const Tensor& x);
/// H [n x f] * w [f] -> [n]
Tensor matvec(const Tensor& h, const Tensor& w);
/// p / ||p||; rejects an all-zero vector.
Tensor vec_l2_normalize(const Tensor& p);
/// Row i scaled by s[i].
Tensor scale_rows(const Tensor& h, const Tensor& s);
Tensor gather_rows(const Tensor& h, const std::vector<std::uint32_t>& idx);
Tensor gather_elems(const Tensor& v, const std::vector<std::uint32_t>& idx);
/// [n x fa] ++ [n x fb] -> [n x (fa+fb)]
Tensor concat_cols(const Tensor& a, const Tensor& b);

namespace detail {

/// Output tensor for an op: gets a gradient buffer iff a tape is active and
/// some input needs a gradient.
Tensor make_op_output(std::vector<std::size_t> shape, bool inputs_require_grad);

/// Registers the backward closure for `out` on the active tape (no-op when
/// `out` carries no gradient buffer).
void record_backward(Tensor& out, std::function<void()> fn);

} // namespace detail

} // namespace flowgnn
