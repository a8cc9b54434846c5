#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gddq/common.hpp"
#include "gddq/rng.hpp"

namespace gddq {

enum class TrafficKind {
    Constant,            // params: {value}
    Uniform,             // params: {min, max}
    TruncatedExponential,// params: {mean, max}
    TruncatedPareto,     // params: {shape, mean, max}
    DiscreteUniformSet,  // params: the value set
};

// Traffic model for inter-arrival times and packet sizes. Truncated kinds
// clamp samples above `max` (3GPP convention) and solve the scale parameter
// numerically so the post-clamp mean matches the configured mean.
class TrafficDistribution {
public:
    TrafficDistribution() = default;

    TrafficDistribution(TrafficKind kind, std::vector<double> params)
        : kind_(kind), params_(std::move(params)) {
        validate_and_calibrate();
    }

    static TrafficDistribution constant(double v) {
        return {TrafficKind::Constant, {v}};
    }
    static TrafficDistribution uniform(double lo, double hi) {
        return {TrafficKind::Uniform, {lo, hi}};
    }
    static TrafficDistribution truncated_exponential(double mean, double max) {
        return {TrafficKind::TruncatedExponential, {mean, max}};
    }
    static TrafficDistribution truncated_pareto(double shape, double mean, double max) {
        return {TrafficKind::TruncatedPareto, {shape, mean, max}};
    }
    static TrafficDistribution discrete_set(std::vector<double> values) {
        return {TrafficKind::DiscreteUniformSet, std::move(values)};
    }

    TrafficKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }

    double sample(RngStream& rng) const {
        switch (kind_) {
            case TrafficKind::Constant:
                return params_[0];
            case TrafficKind::Uniform:
                return rng.uniform(params_[0], params_[1]);
            case TrafficKind::TruncatedExponential:
                return std::min(rng.exponential(scale_), params_[1]);
            case TrafficKind::TruncatedPareto: {
                // inverse CDF of Pareto(shape, xm), clamped at max
                double u = rng.uniform_open();
                double x = scale_ * std::pow(u, -1.0 / params_[0]);
                return std::min(x, params_[2]);
            }
            case TrafficKind::DiscreteUniformSet:
                return params_[rng.uniform_index(params_.size())];
        }
        throw ConfigError("unreachable traffic kind");
    }

    // configured (post-truncation) mean
    double mean() const {
        switch (kind_) {
            case TrafficKind::Constant: return params_[0];
            case TrafficKind::Uniform: return 0.5 * (params_[0] + params_[1]);
            case TrafficKind::TruncatedExponential: return params_[0];
            case TrafficKind::TruncatedPareto: return params_[1];
            case TrafficKind::DiscreteUniformSet: {
                double s = 0;
                for (double v : params_) s += v;
                return s / static_cast<double>(params_.size());
            }
        }
        return 0;
    }

    double min_value() const {
        switch (kind_) {
            case TrafficKind::Constant: return params_[0];
            case TrafficKind::Uniform: return params_[0];
            case TrafficKind::TruncatedExponential: return 0.0;
            case TrafficKind::TruncatedPareto: return scale_;
            case TrafficKind::DiscreteUniformSet:
                return *std::min_element(params_.begin(), params_.end());
        }
        return 0;
    }

    double max_value() const {
        switch (kind_) {
            case TrafficKind::Constant: return params_[0];
            case TrafficKind::Uniform: return params_[1];
            case TrafficKind::TruncatedExponential: return params_[1];
            case TrafficKind::TruncatedPareto: return params_[2];
            case TrafficKind::DiscreteUniformSet:
                return *std::max_element(params_.begin(), params_.end());
        }
        return 0;
    }

    static TrafficKind kind_from_string(const std::string& s) {
        if (s == "constant") return TrafficKind::Constant;
        if (s == "uniform") return TrafficKind::Uniform;
        if (s == "truncated_exponential") return TrafficKind::TruncatedExponential;
        if (s == "truncated_pareto") return TrafficKind::TruncatedPareto;
        if (s == "discrete_set") return TrafficKind::DiscreteUniformSet;
        throw ConfigError("unknown traffic kind: " + s);
    }

    static std::string kind_to_string(TrafficKind k) {
        switch (k) {
            case TrafficKind::Constant: return "constant";
            case TrafficKind::Uniform: return "uniform";
            case TrafficKind::TruncatedExponential: return "truncated_exponential";
            case TrafficKind::TruncatedPareto: return "truncated_pareto";
            case TrafficKind::DiscreteUniformSet: return "discrete_set";
        }
        return "?";
    }

private:
    void validate_and_calibrate() {
        switch (kind_) {
            case TrafficKind::Constant:
                require(params_.size() == 1 && params_[0] >= 0, "constant needs one non-negative value");
                break;
            case TrafficKind::Uniform:
                require(params_.size() == 2 && params_[0] <= params_[1], "uniform needs min <= max");
                break;
            case TrafficKind::TruncatedExponential: {
                require(params_.size() == 2 && params_[0] > 0 && params_[1] > params_[0],
                        "truncated_exponential needs 0 < mean < max");
                // E[min(Exp(s), M)] = s (1 - exp(-M/s)); increasing in s
                double mean = params_[0], max = params_[1];
                scale_ = solve_scale(mean, mean, max * 64.0, [max](double s) {
                    return s * (1.0 - std::exp(-max / s));
                });
                break;
            }
            case TrafficKind::TruncatedPareto: {
                require(params_.size() == 3, "truncated_pareto needs shape, mean, max");
                double shape = params_[0], mean = params_[1], max = params_[2];
                require(shape > 0 && shape != 1.0, "pareto shape must be positive and != 1");
                require(mean > 0 && max > mean, "truncated_pareto needs 0 < mean < max");
                // E[min(Pareto(a, xm), M)] for xm <= M:
                //   a xm^a / (a-1) (xm^(1-a) - M^(1-a)) + M (xm/M)^a
                auto clamped_mean = [shape, max](double xm) {
                    double a = shape;
                    double body = a / (a - 1.0) * (xm - std::pow(xm / max, a) * max);
                    double tail = max * std::pow(xm / max, a);
                    return body + tail;
                };
                scale_ = solve_scale(mean, mean * 1e-9, max, clamped_mean);
                break;
            }
            case TrafficKind::DiscreteUniformSet:
                require(!params_.empty(), "discrete_set needs at least one value");
                break;
        }
    }

    template <typename F>
    static double solve_scale(double target, double lo, double hi, F mean_of) {
        // bisection; mean_of is monotone increasing in the scale
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (mean_of(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    static void require(bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    }

    TrafficKind kind_ = TrafficKind::Constant;
    std::vector<double> params_{0.0};
    double scale_ = 0.0;
};

}  // namespace gddq
