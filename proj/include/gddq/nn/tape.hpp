#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "gddq/common.hpp"

namespace gddq::nn {

using Mat = Eigen::MatrixXd;

enum class Act { LeakyRelu, Tanh, Identity };

inline double act_apply(Act a, double slope, double x) {
    switch (a) {
        case Act::LeakyRelu: return x >= 0 ? x : slope * x;
        case Act::Tanh: return std::tanh(x);
        case Act::Identity: return x;
    }
    return x;
}

// derivative; at the LeakyReLU kink the positive-side slope is used
inline double act_deriv(Act a, double slope, double x) {
    switch (a) {
        case Act::LeakyRelu: return x >= 0 ? 1.0 : slope;
        case Act::Tanh: {
            double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Act::Identity: return 1.0;
    }
    return 1.0;
}

struct ValueRef {
    int idx = -1;
    bool valid() const { return idx >= 0; }
};

// Reverse-mode tape over matrices. Nodes are appended in evaluation order,
// which is already a topological order, so backward() is a single reverse
// sweep. Parameters are leaves tagged with an external slot id; their
// gradients are read back after backward().
class Tape {
public:
    ValueRef constant(Mat v) { return push(Op::Leaf, -1, -1, std::move(v), false); }

    ValueRef param(const Mat& v, int slot) {
        ValueRef r = push(Op::Leaf, -1, -1, v, true);
        nodes_[r.idx].slot = slot;
        return r;
    }

    ValueRef matmul(ValueRef a, ValueRef b) {
        return push(Op::MatMul, a.idx, b.idx, val(a) * val(b));
    }
    ValueRef add(ValueRef a, ValueRef b) { return push(Op::Add, a.idx, b.idx, val(a) + val(b)); }
    ValueRef sub(ValueRef a, ValueRef b) { return push(Op::Sub, a.idx, b.idx, val(a) - val(b)); }

    // bias is a column vector broadcast across the columns of a
    ValueRef add_bias(ValueRef a, ValueRef bias) {
        Mat v = val(a);
        v.colwise() += Eigen::VectorXd(val(bias).col(0));
        return push(Op::AddBias, a.idx, bias.idx, std::move(v));
    }

    ValueRef hadamard(ValueRef a, ValueRef b) {
        return push(Op::Hadamard, a.idx, b.idx, val(a).cwiseProduct(val(b)));
    }

    ValueRef scale(ValueRef a, double c) {
        ValueRef r = push(Op::Scale, a.idx, -1, val(a) * c);
        nodes_[r.idx].c = c;
        return r;
    }

    ValueRef add_const(ValueRef a, double c) {
        ValueRef r = push(Op::AddConst, a.idx, -1, (val(a).array() + c).matrix());
        nodes_[r.idx].c = c;
        return r;
    }

    ValueRef activation(ValueRef a, Act act, double slope = 0.01) {
        Mat v = val(a).unaryExpr([&](double x) { return act_apply(act, slope, x); });
        ValueRef r = push(Op::Activation, a.idx, -1, std::move(v));
        nodes_[r.idx].act = act;
        nodes_[r.idx].c = slope;
        return r;
    }

    // sigma'(a) as a value; differentiable for smooth activations. For
    // LeakyReLU the second derivative is zero almost everywhere, so the
    // backward contribution is zero by convention.
    ValueRef activation_deriv(ValueRef a, Act act, double slope = 0.01) {
        Mat v = val(a).unaryExpr([&](double x) { return act_deriv(act, slope, x); });
        ValueRef r = push(Op::ActivationDeriv, a.idx, -1, std::move(v));
        nodes_[r.idx].act = act;
        nodes_[r.idx].c = slope;
        return r;
    }

    // col i of a -> cols [i*times, (i+1)*times) of the result
    ValueRef repeat_cols(ValueRef a, int times) {
        const Mat& x = val(a);
        Mat v(x.rows(), x.cols() * times);
        for (Eigen::Index i = 0; i < x.cols(); ++i)
            for (int j = 0; j < times; ++j) v.col(i * times + j) = x.col(i);
        ValueRef r = push(Op::RepeatCols, a.idx, -1, std::move(v));
        nodes_[r.idx].block = times;
        return r;
    }

    // inverse pooling of repeat_cols: mean over each block of `times` columns
    ValueRef mean_pool_cols(ValueRef a, int times) {
        const Mat& x = val(a);
        if (x.cols() % times != 0) throw ConfigError("mean_pool_cols: size mismatch");
        Mat v(x.rows(), x.cols() / times);
        for (Eigen::Index i = 0; i < v.cols(); ++i) {
            v.col(i) = x.middleCols(i * times, times).rowwise().mean();
        }
        ValueRef r = push(Op::MeanPoolCols, a.idx, -1, std::move(v));
        nodes_[r.idx].block = times;
        return r;
    }

    // result(0, i*block+j) = a(rows[i], i*block+j); one selected row per block
    ValueRef gather_rows(ValueRef a, std::vector<int> rows, int block) {
        const Mat& x = val(a);
        if (x.cols() != static_cast<Eigen::Index>(rows.size()) * block)
            throw ConfigError("gather_rows: size mismatch");
        Mat v(1, x.cols());
        for (size_t i = 0; i < rows.size(); ++i)
            for (int j = 0; j < block; ++j)
                v(0, i * block + j) = x(rows[i], i * block + j);
        ValueRef r = push(Op::GatherRows, a.idx, -1, std::move(v));
        nodes_[r.idx].block = block;
        nodes_[r.idx].rows = std::move(rows);
        return r;
    }

    ValueRef abs(ValueRef a) { return push(Op::Abs, a.idx, -1, val(a).cwiseAbs()); }
    ValueRef square(ValueRef a) { return push(Op::Square, a.idx, -1, val(a).cwiseProduct(val(a))); }

    ValueRef mean_all(ValueRef a) {
        Mat v(1, 1);
        v(0, 0) = val(a).mean();
        return push(Op::MeanAll, a.idx, -1, std::move(v));
    }

    // identity forward, gradient barrier
    ValueRef detach(ValueRef a) { return push(Op::Leaf, -1, -1, val(a), false); }

    const Mat& val(ValueRef r) const { return nodes_[r.idx].value; }
    double scalar(ValueRef r) const { return nodes_[r.idx].value(0, 0); }

    // Accumulates d(root)/d(param) for every param leaf; root must be 1x1.
    void backward(ValueRef root) {
        if (val(root).size() != 1) throw ConfigError("backward: root must be a scalar");
        for (auto& n : nodes_) {
            n.grad.setZero(n.value.rows(), n.value.cols());
        }
        nodes_[root.idx].grad(0, 0) = 1.0;
        for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
            Node& n = nodes_[i];
            if (!n.need_grad || n.op == Op::Leaf) continue;
            const Mat& g = n.grad;
            switch (n.op) {
                case Op::MatMul:
                    if (needs(n.a)) nodes_[n.a].grad.noalias() += g * nodes_[n.b].value.transpose();
                    if (needs(n.b)) nodes_[n.b].grad.noalias() += nodes_[n.a].value.transpose() * g;
                    break;
                case Op::Add:
                    if (needs(n.a)) nodes_[n.a].grad += g;
                    if (needs(n.b)) nodes_[n.b].grad += g;
                    break;
                case Op::Sub:
                    if (needs(n.a)) nodes_[n.a].grad += g;
                    if (needs(n.b)) nodes_[n.b].grad -= g;
                    break;
                case Op::AddBias:
                    if (needs(n.a)) nodes_[n.a].grad += g;
                    if (needs(n.b)) nodes_[n.b].grad.col(0) += g.rowwise().sum();
                    break;
                case Op::Hadamard:
                    if (needs(n.a)) nodes_[n.a].grad += g.cwiseProduct(nodes_[n.b].value);
                    if (needs(n.b)) nodes_[n.b].grad += g.cwiseProduct(nodes_[n.a].value);
                    break;
                case Op::Scale:
                    if (needs(n.a)) nodes_[n.a].grad += g * n.c;
                    break;
                case Op::AddConst:
                    if (needs(n.a)) nodes_[n.a].grad += g;
                    break;
                case Op::Activation:
                    if (needs(n.a)) {
                        const Mat& x = nodes_[n.a].value;
                        nodes_[n.a].grad += g.cwiseProduct(
                            x.unaryExpr([&](double v) { return act_deriv(n.act, n.c, v); }));
                    }
                    break;
                case Op::ActivationDeriv:
                    if (needs(n.a) && n.act == Act::Tanh) {
                        const Mat& x = nodes_[n.a].value;
                        // d/dx (1 - tanh^2 x) = -2 tanh(x) (1 - tanh^2 x)
                        nodes_[n.a].grad += g.cwiseProduct(x.unaryExpr([](double v) {
                            double t = std::tanh(v);
                            return -2.0 * t * (1.0 - t * t);
                        }));
                    }
                    break;
                case Op::RepeatCols:
                    if (needs(n.a)) {
                        Mat& ga = nodes_[n.a].grad;
                        for (Eigen::Index i = 0; i < ga.cols(); ++i)
                            ga.col(i) += g.middleCols(i * n.block, n.block).rowwise().sum();
                    }
                    break;
                case Op::MeanPoolCols:
                    if (needs(n.a)) {
                        Mat& ga = nodes_[n.a].grad;
                        double inv = 1.0 / static_cast<double>(n.block);
                        for (Eigen::Index i = 0; i < g.cols(); ++i)
                            for (int j = 0; j < n.block; ++j)
                                ga.col(i * n.block + j) += g.col(i) * inv;
                    }
                    break;
                case Op::GatherRows:
                    if (needs(n.a)) {
                        Mat& ga = nodes_[n.a].grad;
                        for (size_t i = 0; i < n.rows.size(); ++i)
                            for (int j = 0; j < n.block; ++j)
                                ga(n.rows[i], i * n.block + j) += g(0, i * n.block + j);
                    }
                    break;
                case Op::Abs:
                    if (needs(n.a)) {
                        const Mat& x = nodes_[n.a].value;
                        nodes_[n.a].grad += g.cwiseProduct(x.unaryExpr([](double v) {
                            return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
                        }));
                    }
                    break;
                case Op::Square:
                    if (needs(n.a))
                        nodes_[n.a].grad += 2.0 * g.cwiseProduct(nodes_[n.a].value);
                    break;
                case Op::MeanAll:
                    if (needs(n.a)) {
                        double s = g(0, 0) / static_cast<double>(nodes_[n.a].value.size());
                        nodes_[n.a].grad.array() += s;
                    }
                    break;
                case Op::Leaf:
                    break;
            }
        }
    }

    // gradient of a param leaf created with slot `slot` (sums duplicates)
    Mat param_grad(int slot) const {
        Mat acc;
        for (const auto& n : nodes_) {
            if (n.op == Op::Leaf && n.slot == slot) {
                if (acc.size() == 0)
                    acc = n.grad;
                else
                    acc += n.grad;
            }
        }
        if (acc.size() == 0) throw ConfigError("param_grad: unknown slot");
        return acc;
    }

    // adds every slot's gradient into out[slot]; entries must be pre-sized
    void accumulate_param_grads(std::vector<Mat>& out) const {
        for (const auto& n : nodes_) {
            if (n.op == Op::Leaf && n.slot >= 0 &&
                n.slot < static_cast<int>(out.size()) && n.grad.size() > 0) {
                out[n.slot] += n.grad;
            }
        }
    }

    void clear() { nodes_.clear(); }
    size_t size() const { return nodes_.size(); }

private:
    enum class Op {
        Leaf, MatMul, Add, Sub, AddBias, Hadamard, Scale, AddConst,
        Activation, ActivationDeriv, RepeatCols, MeanPoolCols, GatherRows,
        Abs, Square, MeanAll,
    };

    struct Node {
        Op op;
        int a = -1, b = -1;
        double c = 0;
        Act act = Act::Identity;
        int block = 1;
        int slot = -1;
        bool need_grad = false;
        std::vector<int> rows;
        Mat value;
        Mat grad;
    };

    bool needs(int idx) const { return idx >= 0 && nodes_[idx].need_grad; }

    ValueRef push(Op op, int a, int b, Mat v, bool force_grad = false) {
        Node n;
        n.op = op;
        n.a = a;
        n.b = b;
        n.value = std::move(v);
        n.need_grad = force_grad || needs(a) || needs(b);
        nodes_.push_back(std::move(n));
        return ValueRef{static_cast<int>(nodes_.size()) - 1};
    }

    std::vector<Node> nodes_;
};

}  // namespace gddq::nn
