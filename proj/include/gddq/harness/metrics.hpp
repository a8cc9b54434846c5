#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gddq/common.hpp"

namespace gddq::harness {

// One row per decision iteration. wallclock_ms is the simulated wall clock
// (iterations x step duration) so metrics stay byte-reproducible; real timing
// goes to the run's timing.json instead.
struct MetricsRow {
    long iteration = 0;
    double utility_raw = 0;
    double reward_clipped = 0;
    double se = 0;
    double ssr_volte = 0, ssr_video = 0, ssr_urllc = 0;
    double epsilon = 0;
    std::optional<double> loss_d, loss_g;
    int action_index = 0;
    double wallclock_ms = 0;
};

inline const char* metrics_header() {
    return "iteration,utility_raw,reward_clipped,se,ssr_volte,ssr_video,ssr_urllc,"
           "epsilon,loss_d,loss_g,action_index,wallclock_ms";
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string metrics_row_csv(const MetricsRow& r) {
    std::ostringstream os;
    os << r.iteration << ',' << format_double(r.utility_raw) << ','
       << format_double(r.reward_clipped) << ',' << format_double(r.se) << ','
       << format_double(r.ssr_volte) << ',' << format_double(r.ssr_video) << ','
       << format_double(r.ssr_urllc) << ',' << format_double(r.epsilon) << ','
       << (r.loss_d ? format_double(*r.loss_d) : "") << ','
       << (r.loss_g ? format_double(*r.loss_g) : "") << ',' << r.action_index << ','
       << format_double(r.wallclock_ms);
    return os.str();
}

inline void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open metrics file for writing: " + path);
    os << metrics_header() << '\n';
    for (const auto& r : rows) os << metrics_row_csv(r) << '\n';
    if (!os) throw IoError("failed writing metrics file: " + path);
}

}  // namespace gddq::harness
