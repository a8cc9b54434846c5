#pragma once

#include <Eigen/Core>
#include <vector>

#include "gddq/common.hpp"
#include "gddq/rng.hpp"

namespace gddq::agents {

struct TransitionTuple {
    Eigen::VectorXd state;
    int action = 0;
    double reward = 0;  // clipped when clipping is enabled
    Eigen::VectorXd next_state;
};

// Fixed-capacity ring. Minibatch sampling is without replacement within one
// minibatch; epoch sweeps shuffle the whole contents.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw ConfigError("replay capacity must be >= 1");
    }

    void push(TransitionTuple t) {
        if (entries_.size() < capacity_) {
            entries_.push_back(std::move(t));
        } else {
            entries_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    size_t size() const { return entries_.size(); }
    size_t capacity() const { return capacity_; }
    bool full() const { return entries_.size() == capacity_; }
    const TransitionTuple& operator[](size_t i) const { return entries_[i]; }

    // m distinct indices (partial Fisher-Yates)
    std::vector<size_t> sample_indices(size_t m, RngStream& rng) const {
        if (m > entries_.size()) throw ConfigError("minibatch larger than buffer contents");
        std::vector<size_t> idx(entries_.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (size_t i = 0; i < m; ++i) {
            size_t j = i + rng.uniform_index(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(m);
        return idx;
    }

    std::vector<size_t> shuffled_indices(RngStream& rng) const {
        std::vector<size_t> idx(entries_.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (size_t i = idx.size(); i > 1; --i) {
            size_t j = rng.uniform_index(i);
            std::swap(idx[i - 1], idx[j]);
        }
        return idx;
    }

private:
    size_t capacity_;
    std::vector<TransitionTuple> entries_;
    size_t cursor_ = 0;
};

}  // namespace gddq::agents
