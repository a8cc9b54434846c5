#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gddq/common.hpp"

namespace gddq {

// Discrete bandwidth split. Allocations are stored in resolution units so the
// sum-to-W constraint is exact; every slice gets at least one unit.
struct Action {
    std::vector<int> units;   // per slice, in multiples of the resolution
    double resolution_hz = 0;
    int index = -1;

    std::vector<double> allocation_hz() const {
        std::vector<double> out(units.size());
        for (size_t i = 0; i < units.size(); ++i) out[i] = units[i] * resolution_hz;
        return out;
    }
};

inline void check_divisible(double total_hz, double resolution_hz) {
    if (resolution_hz <= 0) throw ConfigError("resolution must be > 0");
    double q = total_hz / resolution_hz;
    double rounded = std::round(q);
    if (rounded < 1 || std::abs(q - rounded) > 1e-9 * std::max(1.0, q))
        throw ConfigError("total bandwidth is not divisible by the resolution");
}

// All compositions of total/resolution units into n_slices positive parts,
// in lexicographic order.
inline std::vector<Action> enumerate_actions(double total_hz, double resolution_hz, int n_slices) {
    if (n_slices < 1) throw ConfigError("need at least one slice");
    check_divisible(total_hz, resolution_hz);
    int units = static_cast<int>(std::llround(total_hz / resolution_hz));
    if (units < n_slices)
        throw ConfigError("no positive composition: fewer bandwidth units than slices");

    std::vector<Action> out;
    std::vector<int> cur(n_slices, 0);
    // recursive lexicographic enumeration
    auto rec = [&](auto&& self, int slice, int remaining) -> void {
        if (slice == n_slices - 1) {
            cur[slice] = remaining;
            Action a;
            a.units = cur;
            a.resolution_hz = resolution_hz;
            a.index = static_cast<int>(out.size());
            out.push_back(std::move(a));
            return;
        }
        int max_here = remaining - (n_slices - 1 - slice);  // leave >=1 per remaining slice
        for (int u = 1; u <= max_here; ++u) {
            cur[slice] = u;
            self(self, slice + 1, remaining - u);
        }
    };
    rec(rec, 0, units);
    return out;
}

// The static near-equal split: ceil for the first (units mod n) slices.
inline Action hard_slice_action(int n_slices, double total_hz, double resolution_hz) {
    check_divisible(total_hz, resolution_hz);
    int units = static_cast<int>(std::llround(total_hz / resolution_hz));
    if (units < n_slices) throw ConfigError("not enough units for a positive split");
    Action a;
    a.resolution_hz = resolution_hz;
    a.units.assign(n_slices, units / n_slices);
    for (int i = 0; i < units % n_slices; ++i) a.units[i] += 1;
    return a;
}

}  // namespace gddq
