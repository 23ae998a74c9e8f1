#include "flowgnn/autodiff.hpp"
#include "flowgnn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowgnn {

namespace {
thread_local Tape* g_active_tape = nullptr;
} // namespace

int Tape::record(std::shared_ptr<std::vector<double>> out_grad, std::function<void()> backward) {
    nodes_.push_back(Node{std::move(backward), std::move(out_grad)});
    return static_cast<int>(nodes_.size()) - 1;
}

void Tape::run_backward(int from_node) {
    if (from_node < 0 || from_node >= static_cast<int>(nodes_.size()))
        throw std::logic_error("backward from a node not on this tape");
    // Intermediates are zeroed each pass; leaves live outside the tape and
    // keep accumulating across passes.
    for (int i = 0; i <= from_node; ++i)
        std::fill(nodes_[i].out_grad->begin(), nodes_[i].out_grad->end(), 0.0);
    (*nodes_[from_node].out_grad)[0] = 1.0;
    for (int i = from_node; i >= 0; --i)
        nodes_[i].backward();
}

void Tape::clear() { nodes_.clear(); }

TapeScope::TapeScope(Tape& tape) : previous_(g_active_tape) { g_active_tape = &tape; }
TapeScope::~TapeScope() { g_active_tape = previous_; }

Tape* active_tape() { return g_active_tape; }

void backward(Tensor& loss) {
    if (!loss.defined() || loss.numel() != 1)
        throw std::invalid_argument("backward requires a scalar loss");
    if (!loss.requires_grad())
        return;
    if (loss.tape() == nullptr) {
        // Loss is itself a leaf: d(loss)/d(loss) = 1.
        loss.grad()[0] += 1.0;
        return;
    }
    loss.tape()->run_backward(loss.node());
}

namespace detail {

Tensor make_op_output(std::vector<std::size_t> shape, bool inputs_require_grad) {
    const bool grad = inputs_require_grad && g_active_tape != nullptr;
    return Tensor::zeros(std::move(shape), grad);
}

void record_backward(Tensor& out, std::function<void()> fn) {
    if (!out.requires_grad())
        return;
    const int node = g_active_tape->record(out.grad_buffer(), std::move(fn));
    out.bind_node(g_active_tape, node);
}

} // namespace detail

namespace {

void accum(Tensor& t, const std::vector<double>& g) {
    if (!t.requires_grad())
        return;
    auto& dst = t.grad();
    for (std::size_t i = 0; i < g.size(); ++i)
        dst[i] += g[i];
}

} // namespace

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
    const std::size_t n = x.rows();
    const std::size_t a = x.cols();
    check_shape(weight.rank() == 2, "linear: weight must be a matrix");
    const std::size_t wa = weight.shape()[0];
    const std::size_t b = weight.shape()[1];
    check_shape(a == wa, "linear: input width vs weight rows");
    check_shape(bias.numel() == b, "linear: bias length vs weight cols");

    const bool needs = x.requires_grad() || weight.requires_grad() || bias.requires_grad();
    std::vector<std::size_t> out_shape =
        x.rank() == 1 ? std::vector<std::size_t>{b} : std::vector<std::size_t>{n, b};
    Tensor out = detail::make_op_output(std::move(out_shape), needs);

    matmul(x.values().data(), weight.values().data(), out.data(), n, a, b);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b; ++j)
            out.data()[i * b + j] += bias.values()[j];

    detail::record_backward(out, [x = x, weight = weight, bias = bias, out = out, n, a, b]() mutable {
        const auto& gy = out.grad();
        if (x.requires_grad())
            matmul_a_bt_accum(gy.data(), weight.values().data(), x.grad().data(), n, b, a);
        if (weight.requires_grad())
            matmul_at_b_accum(x.values().data(), gy.data(), weight.grad().data(), a, n, b);
        if (bias.requires_grad()) {
            auto& gb = bias.grad();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < b; ++j)
                    gb[j] += gy[i * b + j];
        }
    });
    return out;
}

Tensor relu(const Tensor& x) {
    Tensor out = detail::make_op_output(x.shape(), x.requires_grad());
    const auto& v = x.values();
    for (std::size_t i = 0; i < v.size(); ++i)
        out.data()[i] = v[i] > 0.0 ? v[i] : 0.0;

    detail::record_backward(out, [x = x, out = out]() mutable {
        if (!x.requires_grad())
            return;
        const auto& gy = out.grad();
        const auto& v = x.values();
        auto& gx = x.grad();
        // Subgradient at exactly zero is taken as zero.
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > 0.0)
                gx[i] += gy[i];
    });
    return out;
}

Tensor tanh(const Tensor& x) {
    Tensor out = detail::make_op_output(x.shape(), x.requires_grad());
    const auto& v = x.values();
    for (std::size_t i = 0; i < v.size(); ++i)
        out.data()[i] = std::tanh(v[i]);

    detail::record_backward(out, [x = x, out = out]() mutable {
        if (!x.requires_grad())
            return;
        const auto& gy = out.grad();
        const auto& y = out.values();
        auto& gx = x.grad();
        for (std::size_t i = 0; i < y.size(); ++i)
            gx[i] += gy[i] * (1.0 - y[i] * y[i]);
    });
    return out;
}

Tensor reduce_mean_rows(const Tensor& x) {
    check_shape(x.rank() == 2, "reduce_mean_rows: input must be a matrix");
    const std::size_t n = x.shape()[0];
    const std::size_t f = x.shape()[1];
    check_shape(n > 0, "reduce_mean_rows: empty input");

    Tensor out = detail::make_op_output({f}, x.requires_grad());
    const auto& v = x.values();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < f; ++j)
            out.data()[j] += v[i * f + j];
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < f; ++j)
        out.data()[j] *= inv_n;

    detail::record_backward(out, [x = x, out = out, n, f, inv_n]() mutable {
        const auto& gy = out.grad();
        auto& gx = x.grad();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < f; ++j)
                gx[i * f + j] += gy[j] * inv_n;
    });
    return out;
}

Tensor reduce_max_rows(const Tensor& x) {
    check_shape(x.rank() == 2, "reduce_max_rows: input must be a matrix");
    const std::size_t n = x.shape()[0];
    const std::size_t f = x.shape()[1];
    check_shape(n > 0, "reduce_max_rows: empty input");

    Tensor out = detail::make_op_output({f}, x.requires_grad());
    const auto& v = x.values();
    std::vector<std::size_t> arg(f, 0);
    for (std::size_t j = 0; j < f; ++j) {
        double best = v[j];
        for (std::size_t i = 1; i < n; ++i) {
            const double cand = v[i * f + j];
            if (cand > best) {
                best = cand;
                arg[j] = i;
            }
        }
        out.data()[j] = best;
    }

    detail::record_backward(out, [x = x, out = out, arg = std::move(arg), f]() mutable {
        const auto& gy = out.grad();
        auto& gx = x.grad();
        for (std::size_t j = 0; j < f; ++j)
            gx[arg[j] * f + j] += gy[j];
    });
    return out;
}

Tensor concat(const Tensor& a, const Tensor& b) {
    check_shape(a.rank() == 1 && b.rank() == 1, "concat: inputs must be vectors");
    const std::size_t fa = a.numel();
    const std::size_t fb = b.numel();
    Tensor out = detail::make_op_output({fa + fb}, a.requires_grad() || b.requires_grad());
    std::copy(a.values().begin(), a.values().end(), out.values().begin());
    std::copy(b.values().begin(), b.values().end(), out.values().begin() + static_cast<std::ptrdiff_t>(fa));

    detail::record_backward(out, [a = a, b = b, out = out, fa, fb]() mutable {
        const auto& gy = out.grad();
        if (a.requires_grad())
            for (std::size_t i = 0; i < fa; ++i)
                a.grad()[i] += gy[i];
        if (b.requires_grad())
            for (std::size_t i = 0; i < fb; ++i)
                b.grad()[i] += gy[fa + i];
    });
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    check_shape(a.shape() == b.shape(), "add: operand shapes differ");
    Tensor out = detail::make_op_output(a.shape(), a.requires_grad() || b.requires_grad());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        out.data()[i] = va[i] + vb[i];

    detail::record_backward(out, [a = a, b = b, out = out]() mutable {
        accum(a, out.grad());
        accum(b, out.grad());
    });
    return out;
}

Tensor l2_normalize_rows(const Tensor& x) {
    check_shape(x.rank() == 2, "l2_normalize_rows: input must be a matrix");
    const std::size_t n = x.shape()[0];
    const std::size_t f = x.shape()[1];

    Tensor out = detail::make_op_output(x.shape(), x.requires_grad());
    const auto& v = x.values();
    std::vector<double> norms(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = l2_norm(v.data() + i * f, f);
        norms[i] = r;
        const double scale = r == 0.0 ? 1.0 : 1.0 / r;
        for (std::size_t j = 0; j < f; ++j)
            out.data()[i * f + j] = v[i * f + j] * scale;
    }

    detail::record_backward(out, [x = x, out = out, norms = std::move(norms), n, f]() mutable {
        const auto& gy = out.grad();
        const auto& y = out.values();
        auto& gx = x.grad();
        for (std::size_t i = 0; i < n; ++i) {
            if (norms[i] == 0.0) {
                // Zero rows passed through as identity.
                for (std::size_t j = 0; j < f; ++j)
                    gx[i * f + j] += gy[i * f + j];
                continue;
            }
            const double proj = dot(gy.data() + i * f, y.data() + i * f, f);
            const double inv_r = 1.0 / norms[i];
            for (std::size_t j = 0; j < f; ++j)
                gx[i * f + j] += (gy[i * f + j] - y[i * f + j] * proj) * inv_r;
        }
    });
    return out;
}

Tensor mse(const Tensor& pred, const Tensor& target) {
    check_shape(pred.shape() == target.shape(), "mse: operand shapes differ");
    const std::size_t n = pred.numel();
    check_shape(n > 0, "mse: empty input");

    Tensor out = detail::make_op_output({1}, pred.requires_grad() || target.requires_grad());
    const auto& p = pred.values();
    const auto& t = target.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = p[i] - t[i];
        acc += d * d;
    }
    out.data()[0] = acc / static_cast<double>(n);

    detail::record_backward(out, [pred = pred, target = target, out = out, n]() mutable {
        const double g = out.grad()[0] * 2.0 / static_cast<double>(n);
        const auto& p = pred.values();
        const auto& t = target.values();
        if (pred.requires_grad())
            for (std::size_t i = 0; i < n; ++i)
                pred.grad()[i] += g * (p[i] - t[i]);
        if (target.requires_grad())
            for (std::size_t i = 0; i < n; ++i)
                target.grad()[i] -= g * (p[i] - t[i]);
    });
    return out;
}

Tensor sum(const Tensor& x) {
    Tensor out = detail::make_op_output({1}, x.requires_grad());
    double acc = 0.0;
    for (const double v : x.values())
        acc += v;
    out.data()[0] = acc;

    detail::record_backward(out, [x = x, out = out]() mutable {
        const double g = out.grad()[0];
        auto& gx = x.grad();
        for (std::size_t i = 0; i < gx.size(); ++i)
            gx[i] += g;
    });
    return out;
}

Tensor matvec(const Tensor& h, const Tensor& w) {
    check_shape(h.rank() == 2, "matvec: input must be a matrix");
    const std::size_t n = h.shape()[0];
    const std::size_t f = h.shape()[1];
    check_shape(w.numel() == f, "matvec: vector length vs matrix cols");

    Tensor out = detail::make_op_output({n}, h.requires_grad() || w.requires_grad());
    const auto& hv = h.values();
    const auto& wv = w.values();
    for (std::size_t i = 0; i < n; ++i)
        out.data()[i] = dot(hv.data() + i * f, wv.data(), f);

    detail::record_backward(out, [h = h, w = w, out = out, n, f]() mutable {
        const auto& gy = out.grad();
        const auto& hv = h.values();
        const auto& wv = w.values();
        if (h.requires_grad()) {
            auto& gh = h.grad();
            for (std::size_t i = 0; i < n; ++i)
                axpy(gy[i], wv.data(), gh.data() + i * f, f);
        }
        if (w.requires_grad()) {
            auto& gw = w.grad();
            for (std::size_t i = 0; i < n; ++i)
                axpy(gy[i], hv.data() + i * f, gw.data(), f);
        }
    });
    return out;
}

Tensor vec_l2_normalize(const Tensor& p) {
    check_shape(p.rank() == 1, "vec_l2_normalize: input must be a vector");
    const std::size_t f = p.numel();
    const double r = l2_norm(p.values().data(), f);
    if (r == 0.0)
        throw std::invalid_argument("vec_l2_normalize: zero vector");

    Tensor out = detail::make_op_output({f}, p.requires_grad());
    for (std::size_t j = 0; j < f; ++j)
        out.data()[j] = p.values()[j] / r;

    detail::record_backward(out, [p = p, out = out, r, f]() mutable {
        const auto& gy = out.grad();
        const auto& y = out.values();
        const double proj = dot(gy.data(), y.data(), f);
        auto& gp = p.grad();
        for (std::size_t j = 0; j < f; ++j)
            gp[j] += (gy[j] - y[j] * proj) / r;
    });
    return out;
}

Tensor scale_rows(const Tensor& h, const Tensor& s) {
    check_shape(h.rank() == 2, "scale_rows: input must be a matrix");
    const std::size_t n = h.shape()[0];
    const std::size_t f = h.shape()[1];
    check_shape(s.numel() == n, "scale_rows: scale length vs rows");

    Tensor out = detail::make_op_output(h.shape(), h.requires_grad() || s.requires_grad());
    const auto& hv = h.values();
    const auto& sv = s.values();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < f; ++j)
            out.data()[i * f + j] = hv[i * f + j] * sv[i];

    detail::record_backward(out, [h = h, s = s, out = out, n, f]() mutable {
        const auto& gy = out.grad();
        const auto& hv = h.values();
        const auto& sv = s.values();
        if (h.requires_grad()) {
            auto& gh = h.grad();
            for (std::size_t i = 0; i < n; ++i)
                axpy(sv[i], gy.data() + i * f, gh.data() + i * f, f);
        }
        if (s.requires_grad()) {
            auto& gs = s.grad();
            for (std::size_t i = 0; i < n; ++i)
                gs[i] += dot(gy.data() + i * f, hv.data() + i * f, f);
        }
    });
    return out;
}

Tensor gather_rows(const Tensor& h, const std::vector<std::uint32_t>& idx) {
    check_shape(h.rank() == 2, "gather_rows: input must be a matrix");
    const std::size_t n = h.shape()[0];
    const std::size_t f = h.shape()[1];
    for (const auto i : idx)
        check_shape(i < n, "gather_rows: index out of range");

    Tensor out = detail::make_op_output({idx.size(), f}, h.requires_grad());
    const auto& hv = h.values();
    for (std::size_t k = 0; k < idx.size(); ++k)
        std::copy(hv.data() + idx[k] * f, hv.data() + (idx[k] + 1) * f,
                  out.data() + k * f);

    detail::record_backward(out, [h = h, out = out, idx = idx, f]() mutable {
        const auto& gy = out.grad();
        auto& gh = h.grad();
        for (std::size_t k = 0; k < idx.size(); ++k)
            axpy(1.0, gy.data() + k * f, gh.data() + idx[k] * f, f);
    });
    return out;
}

Tensor gather_elems(const Tensor& v, const std::vector<std::uint32_t>& idx) {
    check_shape(v.rank() == 1, "gather_elems: input must be a vector");
    const std::size_t n = v.numel();
    for (const auto i : idx)
        check_shape(i < n, "gather_elems: index out of range");

    Tensor out = detail::make_op_output({idx.size()}, v.requires_grad());
    for (std::size_t k = 0; k < idx.size(); ++k)
        out.data()[k] = v.values()[idx[k]];

    detail::record_backward(out, [v = v, out = out, idx = idx]() mutable {
        const auto& gy = out.grad();
        auto& gv = v.grad();
        for (std::size_t k = 0; k < idx.size(); ++k)
            gv[idx[k]] += gy[k];
    });
    return out;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
    check_shape(a.rank() == 2 && b.rank() == 2, "concat_cols: inputs must be matrices");
    check_shape(a.shape()[0] == b.shape()[0], "concat_cols: row counts differ");
    const std::size_t n = a.shape()[0];
    const std::size_t fa = a.shape()[1];
    const std::size_t fb = b.shape()[1];
    const std::size_t fo = fa + fb;

    Tensor out = detail::make_op_output({n, fo}, a.requires_grad() || b.requires_grad());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(va.data() + i * fa, va.data() + (i + 1) * fa, out.data() + i * fo);
        std::copy(vb.data() + i * fb, vb.data() + (i + 1) * fb, out.data() + i * fo + fa);
    }

    detail::record_backward(out, [a = a, b = b, out = out, n, fa, fb, fo]() mutable {
        const auto& gy = out.grad();
        if (a.requires_grad()) {
            auto& ga = a.grad();
            for (std::size_t i = 0; i < n; ++i)
                axpy(1.0, gy.data() + i * fo, ga.data() + i * fa, fa);
        }
        if (b.requires_grad()) {
            auto& gb = b.grad();
            for (std::size_t i = 0; i < n; ++i)
                axpy(1.0, gy.data() + i * fo + fa, gb.data() + i * fb, fb);
        }
    });
    return out;
}

} // namespace flowgnn
