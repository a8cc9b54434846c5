#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gddq/nn/mlp.hpp"

namespace gddq::nn {

struct GradCheckReport {
    double max_rel_error = 0;
    struct Entry {
        std::string tensor;
        int row, col;
        double analytic, numeric, rel_error;
    };
    std::vector<Entry> worst;  // the single worst entry per tensor
};

// Central finite differences with step 1e-5 against the analytic gradients.
// loss_fn must evaluate the loss at the ParamSet it is given.
inline GradCheckReport gradcheck(ParamSet params,
                                 const std::function<double(const ParamSet&)>& loss_fn,
                                 const std::vector<Mat>& analytic,
                                 double step = 1e-5) {
    GradCheckReport report;
    for (size_t ti = 0; ti < params.count(); ++ti) {
        GradCheckReport::Entry worst{params.tensors[ti].name, -1, -1, 0, 0, 0};
        Mat& w = params.tensors[ti].value;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                double saved = w(r, c);
                w(r, c) = saved + step;
                double up = loss_fn(params);
                w(r, c) = saved - step;
                double down = loss_fn(params);
                w(r, c) = saved;
                double numeric = (up - down) / (2 * step);
                double a = analytic[ti](r, c);
                double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
                double rel = std::abs(a - numeric) / denom;
                if (rel > worst.rel_error)
                    worst = {params.tensors[ti].name, static_cast<int>(r),
                             static_cast<int>(c), a, numeric, rel};
            }
        }
        report.worst.push_back(worst);
        report.max_rel_error = std::max(report.max_rel_error, worst.rel_error);
    }
    return report;
}

}  // namespace gddq::nn
