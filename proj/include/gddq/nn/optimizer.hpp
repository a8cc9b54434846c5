#pragma once

#include <cmath>
#include <vector>

#include "gddq/nn/mlp.hpp"

namespace gddq::nn {

enum class OptimKind { SGD, Adam, RMSProp };

struct OptimConfig {
    OptimKind kind = OptimKind::Adam;
    double lr = 1e-3;
    double clip_norm = 10.0;  // 0 disables clipping
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double rms_decay = 0.99;
};

// In-place parameter updates with global gradient-norm clipping. A non-finite
// gradient is treated as a divergence signal and raises NumericalError.
class Optimizer {
public:
    Optimizer() = default;
    explicit Optimizer(OptimConfig cfg) : cfg_(cfg) {}

    const OptimConfig& config() const { return cfg_; }

    void step(ParamSet& params, std::vector<Mat> grads) {
        if (grads.size() != params.count())
            throw ConfigError("optimizer: gradient/parameter count mismatch");
        double sq = 0;
        for (size_t i = 0; i < grads.size(); ++i) {
            if (grads[i].rows() != params.tensors[i].value.rows() ||
                grads[i].cols() != params.tensors[i].value.cols())
                throw ConfigError("optimizer: gradient shape mismatch at " +
                                  params.tensors[i].name);
            if (!grads[i].allFinite())
                throw NumericalError("non-finite gradient at " + params.tensors[i].name);
            sq += grads[i].squaredNorm();
        }
        double norm = std::sqrt(sq);
        if (cfg_.clip_norm > 0 && norm > cfg_.clip_norm) {
            double s = cfg_.clip_norm / norm;
            for (auto& g : grads) g *= s;
        }

        if (state_m_.empty() && cfg_.kind != OptimKind::SGD) {
            state_m_.resize(grads.size());
            state_v_.resize(grads.size());
            for (size_t i = 0; i < grads.size(); ++i) {
                state_m_[i] = Mat::Zero(grads[i].rows(), grads[i].cols());
                state_v_[i] = Mat::Zero(grads[i].rows(), grads[i].cols());
            }
        }

        switch (cfg_.kind) {
            case OptimKind::SGD:
                for (size_t i = 0; i < grads.size(); ++i)
                    params.tensors[i].value -= cfg_.lr * grads[i];
                break;
            case OptimKind::Adam: {
                ++t_;
                double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
                double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
                for (size_t i = 0; i < grads.size(); ++i) {
                    state_m_[i] = cfg_.beta1 * state_m_[i] + (1 - cfg_.beta1) * grads[i];
                    state_v_[i] = cfg_.beta2 * state_v_[i] +
                                  (1 - cfg_.beta2) * grads[i].cwiseProduct(grads[i]);
                    Mat mhat = state_m_[i] / bc1;
                    Mat vhat = state_v_[i] / bc2;
                    params.tensors[i].value.array() -=
                        cfg_.lr * mhat.array() / (vhat.array().sqrt() + cfg_.eps);
                }
                break;
            }
            case OptimKind::RMSProp:
                for (size_t i = 0; i < grads.size(); ++i) {
                    if (state_v_.empty()) break;
                    state_v_[i] = cfg_.rms_decay * state_v_[i] +
                                  (1 - cfg_.rms_decay) * grads[i].cwiseProduct(grads[i]);
                    params.tensors[i].value.array() -=
                        cfg_.lr * grads[i].array() / (state_v_[i].array().sqrt() + cfg_.eps);
                }
                break;
        }
        params.version += 1;
    }

private:
    OptimConfig cfg_;
    std::vector<Mat> state_m_, state_v_;
    long t_ = 0;
};

inline OptimKind optim_kind_from_string(const std::string& s) {
    if (s == "sgd") return OptimKind::SGD;
    if (s == "adam") return OptimKind::Adam;
    if (s == "rmsprop") return OptimKind::RMSProp;
    throw ConfigError("unknown optimizer kind: " + s);
}

}  // namespace gddq::nn
