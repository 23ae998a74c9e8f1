#include "flowgnn/gradcheck.hpp"
#include "flowgnn/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace flowgnn {

GradCheckReport finite_diff_check(std::vector<Tensor>& params,
                                  const std::function<Tensor()>& loss_fn,
                                  const GradCheckOptions& options) {
    for (auto& p : params) {
        if (!p.requires_grad())
            throw std::invalid_argument("finite_diff_check: parameter without gradient buffer");
        p.zero_grad();
    }

    Tape tape;
    {
        TapeScope scope(tape);
        Tensor loss = loss_fn();
        backward(loss);
    }

    GradCheckReport report;
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& param = params[p];
        const std::size_t count = param.numel();
        std::size_t stride = 1;
        if (options.max_coords_per_param > 0 && count > options.max_coords_per_param)
            stride = (count + options.max_coords_per_param - 1) / options.max_coords_per_param;
        for (std::size_t i = 0; i < count; i += stride) {
            const double saved = param.data()[i];
            param.data()[i] = saved + options.step;
            const double up = loss_fn().scalar_value();
            param.data()[i] = saved - options.step;
            const double down = loss_fn().scalar_value();
            param.data()[i] = saved;

            const double numeric = (up - down) / (2.0 * options.step);
            const double analytic = param.grad()[i];
            const double denom =
                std::max({std::abs(analytic), std::abs(numeric), options.denom_floor});
            const double rel = std::abs(analytic - numeric) / denom;
            ++report.coords_checked;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_param = p;
                report.worst_coord = i;
                report.analytic_at_worst = analytic;
                report.numeric_at_worst = numeric;
            }
        }
    }
    return report;
}

} // namespace flowgnn
