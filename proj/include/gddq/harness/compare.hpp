#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <vector>

#include "gddq/harness/runner.hpp"

namespace gddq::harness {

struct CompareReport {
    std::vector<RunSummary> ranked;  // by mean final-window utility, best first
    std::string text;
    std::string csv;
};

// Ranks runs that share an environment config. Seeds may differ; anything
// else in the env section must match.
inline CompareReport compare(std::vector<RunSummary> runs) {
    if (runs.size() < 2) throw ConfigError("compare needs at least two runs");
    for (size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].env_echo != runs[0].env_echo)
            throw ConfigError("compare: runs use different environment configs");
    }
    std::stable_sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
        return a.mean_utility_last_window > b.mean_utility_last_window;
    });

    CompareReport rep;
    std::ostringstream csv, text;
    csv << "rank,algo,seed,mean_utility,mean_se,ssr_volte,ssr_video,ssr_urllc,utility_gap_to_best\n";
    text << std::left << std::setw(5) << "rank" << std::setw(10) << "algo" << std::setw(7)
         << "seed" << std::setw(12) << "utility" << std::setw(10) << "se" << std::setw(11)
         << "ssr_volte" << std::setw(11) << "ssr_video" << std::setw(11) << "ssr_urllc"
         << "gap_to_best\n";
    double best = runs.front().mean_utility_last_window;
    for (size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        auto ssr = [&](size_t k) { return k < r.mean_ssr_last_window.size()
                                              ? r.mean_ssr_last_window[k] : 0.0; };
        double gap = best - r.mean_utility_last_window;
        csv << i + 1 << ',' << r.algo << ',' << r.seed << ','
            << format_double(r.mean_utility_last_window) << ','
            << format_double(r.mean_se_last_window) << ',' << format_double(ssr(0)) << ','
            << format_double(ssr(1)) << ',' << format_double(ssr(2)) << ','
            << format_double(gap) << '\n';
        text << std::left << std::setw(5) << i + 1 << std::setw(10) << r.algo << std::setw(7)
             << r.seed << std::setw(12) << std::setprecision(5) << r.mean_utility_last_window
             << std::setw(10) << std::setprecision(4) << r.mean_se_last_window << std::setw(11)
             << ssr(0) << std::setw(11) << ssr(1) << std::setw(11) << ssr(2)
             << std::setprecision(4) << gap << '\n';
    }
    rep.csv = csv.str();
    rep.text = text.str();
    rep.ranked = std::move(runs);
    return rep;
}

}  // namespace gddq::harness
