#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gddq/nn/tape.hpp"
#include "gddq/rng.hpp"

namespace gddq::nn {

enum class Init { UniformFanIn, Orthogonal };

// Named tensor container; the unit of cloning, checkpointing and updates.
struct ParamSet {
    struct Tensor {
        std::string name;
        Mat value;
    };
    std::vector<Tensor> tensors;
    std::uint64_t version = 0;

    int add(const std::string& name, Mat value) {
        tensors.push_back({name, std::move(value)});
        return static_cast<int>(tensors.size()) - 1;
    }

    Mat& at(const std::string& name) {
        for (auto& t : tensors)
            if (t.name == name) return t.value;
        throw ConfigError("no tensor named " + name);
    }
    const Mat& at(const std::string& name) const {
        for (const auto& t : tensors)
            if (t.name == name) return t.value;
        throw ConfigError("no tensor named " + name);
    }

    size_t count() const { return tensors.size(); }

    bool finite() const {
        for (const auto& t : tensors)
            if (!t.value.allFinite()) return false;
        return true;
    }
};

inline ParamSet clone_params(const ParamSet& src) { return src; }

inline Mat init_weight(int rows, int cols, Init init, RngStream& rng) {
    Mat w(rows, cols);
    if (init == Init::UniformFanIn) {
        double bound = 1.0 / std::sqrt(static_cast<double>(cols));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-bound, bound);
    } else {
        Mat g(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ() * Mat::Identity(rows, std::min(rows, cols));
        w = q.leftCols(cols);
        if (w.cols() < cols) throw ConfigError("orthogonal init needs rows >= cols");
    }
    return w;
}

// Plain fully-connected stack. Hidden layers use `act`; the output layer is
// linear. Tensors live in an external ParamSet under `prefix`.
struct Mlp {
    std::vector<int> widths;  // input, hidden..., output
    Act act = Act::LeakyRelu;
    double slope = 0.01;
    std::string prefix;
    int first_tensor = -1;  // index of W0 inside the owning ParamSet

    int layer_count() const { return static_cast<int>(widths.size()) - 1; }
    int tensor_count() const { return 2 * layer_count(); }

    void init_params(ParamSet& ps, Init init, RngStream& rng) {
        if (widths.size() < 2) throw ConfigError("mlp needs at least 2 widths");
        first_tensor = static_cast<int>(ps.count());
        for (int l = 0; l < layer_count(); ++l) {
            ps.add(prefix + ".W" + std::to_string(l),
                   init_weight(widths[l + 1], widths[l], init, rng));
            double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
            Mat b(widths[l + 1], 1);
            for (int i = 0; i < widths[l + 1]; ++i) b(i, 0) = rng.uniform(-bound, bound);
            ps.add(prefix + ".b" + std::to_string(l), std::move(b));
        }
    }

    // params[i] must be the tape leaf for the owning ParamSet's tensor i
    ValueRef forward(Tape& t, ValueRef x, const std::vector<ValueRef>& params) const {
        ValueRef h = x;
        for (int l = 0; l < layer_count(); ++l) {
            ValueRef w = params[first_tensor + 2 * l];
            ValueRef b = params[first_tensor + 2 * l + 1];
            h = t.add_bias(t.matmul(w, h), b);
            if (l + 1 < layer_count()) h = t.activation(h, act, slope);
        }
        return h;
    }

    // pre-activations of every layer (z_1..z_L); z_L is also the output
    std::vector<ValueRef> forward_collect(Tape& t, ValueRef x,
                                          const std::vector<ValueRef>& params) const {
        std::vector<ValueRef> zs;
        ValueRef h = x;
        for (int l = 0; l < layer_count(); ++l) {
            ValueRef w = params[first_tensor + 2 * l];
            ValueRef b = params[first_tensor + 2 * l + 1];
            ValueRef z = t.add_bias(t.matmul(w, h), b);
            zs.push_back(z);
            h = (l + 1 < layer_count()) ? t.activation(z, act, slope) : z;
        }
        return zs;
    }
};

// Binds every tensor of a ParamSet onto the tape. With grads=false the leaves
// are constants (a frozen/target network).
inline std::vector<ValueRef> bind_params(Tape& t, const ParamSet& ps, bool grads = true) {
    std::vector<ValueRef> refs;
    refs.reserve(ps.count());
    for (size_t i = 0; i < ps.count(); ++i) {
        refs.push_back(grads ? t.param(ps.tensors[i].value, static_cast<int>(i))
                             : t.constant(ps.tensors[i].value));
    }
    return refs;
}

// Gradients aligned with ps.tensors after backward(); zero for untouched slots.
inline std::vector<Mat> collect_grads(const Tape& t, const ParamSet& ps) {
    std::vector<Mat> out(ps.count());
    for (size_t i = 0; i < ps.count(); ++i)
        out[i] = Mat::Zero(ps.tensors[i].value.rows(), ps.tensors[i].value.cols());
    t.accumulate_param_grads(out);
    return out;
}

}  // namespace gddq::nn
