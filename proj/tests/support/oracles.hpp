#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hitcast/charts.hpp"
#include "hitcast/dates.hpp"
#include "hitcast/text_norm.hpp"

namespace testsupport {

// Mann-Whitney statistic by explicit pair counting:
// P(score+ > score-) + 1/2 P(score+ = score-).
inline double pair_count_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

struct BruteLabel {
    bool hit = false;
    std::optional<hitcast::Date> first_hit_week;
};

// Independent rescan: one full pass for the earliest qualifying main-chart
// week, one for bubbling membership, then set arithmetic for the classes.
inline std::map<hitcast::SongKey, BruteLabel> brute_force_labels(
    const std::vector<hitcast::ChartEntry>& entries, int top_n) {
    std::map<hitcast::SongKey, hitcast::Date> first_top;
    for (const auto& e : entries) {
        if (e.kind != hitcast::ChartKind::main || e.position > top_n) continue;
        const auto it = first_top.find(e.song);
        if (it == first_top.end() || e.week_start < it->second) first_top[e.song] = e.week_start;
    }
    std::set<hitcast::SongKey> bubbled;
    for (const auto& e : entries)
        if (e.kind == hitcast::ChartKind::bubbling) bubbled.insert(e.song);

    std::map<hitcast::SongKey, BruteLabel> out;
    for (const auto& [song, week] : first_top) out[song] = BruteLabel{true, week};
    for (const auto& song : bubbled)
        if (!first_top.count(song)) out[song] = BruteLabel{false, std::nullopt};
    return out;
}

} // namespace testsupport
