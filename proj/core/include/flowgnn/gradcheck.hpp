#pragma once

#include "flowgnn/tensor.hpp"

#include <functional>
#include <string>

namespace flowgnn {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t coords_checked = 0;
    std::size_t worst_param = 0;
    std::size_t worst_coord = 0;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

struct GradCheckOptions {
    double step = 1e-6;
    /// Denominator floor in |a-n| / max(|a|,|n|,floor); keeps near-zero
    /// gradients from blowing up the relative error.
    double denom_floor = 1e-4;
    /// Check every coordinate when 0, else at most this many per parameter
    /// (strided so the whole tensor is covered).
    std::size_t max_coords_per_param = 0;
};

/// Central-difference check of d(loss)/d(param) for every parameter in
/// `params`. `loss_fn` must rebuild the loss from current parameter values
/// on each call (it is invoked under an active tape for the analytic pass
/// and without one for the probes). Parameter gradients are zeroed first.
GradCheckReport finite_diff_check(std::vector<Tensor>& params,
                                  const std::function<Tensor()>& loss_fn,
                                  const GradCheckOptions& options = {});

} // namespace flowgnn
