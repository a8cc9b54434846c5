#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "gddq/common.hpp"

namespace gddq {

// Deterministic RNG stream. Distributions are inverse-CDF on top of
// mt19937_64 so byte-identical sequences do not depend on the standard
// library's distribution implementations.
class RngStream {
public:
    RngStream() : engine_(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1); never returns an exact endpoint
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is < 2^-40 for the ranges used here (n < 2^24)
        return engine_() % n;
    }

    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    // unit-mean exponential; models Rayleigh power fading
    double exp_unit() { return -std::log(uniform_open()); }

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = uniform_open();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return mean + stddev * r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// One master seed fans out into independent named substreams, so e.g.
// agent-internal sampling never perturbs traffic realizations.
class SeedTree {
public:
    explicit SeedTree(std::uint64_t master) : master_(master) {}

    RngStream stream(std::string_view name) const {
        std::uint64_t mix = fnv1a64(name) ^ (master_ * 0x9e3779b97f4a7c15ull + 0xd1b54a32d192ed03ull);
        // one splitmix64 round decorrelates adjacent master seeds
        mix += 0x9e3779b97f4a7c15ull;
        mix = (mix ^ (mix >> 30)) * 0xbf58476d1ce4e5b9ull;
        mix = (mix ^ (mix >> 27)) * 0x94d049bb133111ebull;
        mix = mix ^ (mix >> 31);
        return RngStream(mix);
    }

    RngStream stream(std::string_view name, int index) const {
        return stream(std::string(name) + "/" + std::to_string(index));
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

}  // namespace gddq
