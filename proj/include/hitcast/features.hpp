#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include <json.hpp>

#include "hitcast/charts.hpp"
#include "hitcast/dataset.hpp"
#include "hitcast/rejects.hpp"
#include "hitcast/scrobbles.hpp"

namespace hitcast {

enum class CountMode { cumulative, weekly };

struct ListeningBuildOptions {
    DateInterval window;
    CountMode count_mode = CountMode::cumulative;
    // Post-hit rows of hit songs are excluded by default; with this flag they
    // are kept as label 0.
    bool include_post_hit = false;
};

// Inner-join accounting emitted by both builders: rows in = rows kept +
// rows dropped, always.
struct JoinReport {
    std::size_t songs_seen = 0;
    std::size_t songs_kept = 0;
    std::size_t songs_dropped = 0;  // not present in the label table
    std::size_t records_seen = 0;   // scrobbles (listening) or CSV rows (audio)
    std::size_t records_kept = 0;
    std::size_t records_dropped = 0;
    std::size_t rows_emitted = 0;
    std::size_t rows_post_hit_excluded = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    nlohmann::json to_json() const;
};

// The (song, week) x user matrix. One row per (song, week) for every week of
// the window in which the song has a scrobble at or before that week
// (cumulative) or within it (weekly). Cell (row, user) is that user's listen
// count up to and including the week (cumulative) or within the week
// (weekly). Label 1 iff the song is a hit and week_start < first_hit_week.
// Feature columns are user ids in lexicographic order.
Dataset build_listening_dataset(const std::vector<Scrobble>& cleaned, const LabelTable& labels,
                                const ListeningBuildOptions& opt, JoinReport* report = nullptr);

struct AudioBuildOptions {
    enum class FeatureSet { meta, audio };
    FeatureSet feature_set = FeatureSet::meta;
    // Meta-feature columns (e.g. danceability, hotness) dropped when
    // feature_set == audio. Must be non-empty in that case.
    std::set<std::string> meta_feature_names;
    double max_reject_fraction = 0.10;
    const FeatTokenSet* feat_tokens = nullptr;
};

// Per-song audio dataset from a CSV with header `artist,title,<f1>,...,<fk>`.
// One row per song present in both the CSV and the label table; empty cells
// become missing markers resolved by training-fold imputation.
Dataset build_audio_dataset(std::istream& in, const LabelTable& labels,
                            const AudioBuildOptions& opt, JoinReport* report = nullptr,
                            ParseReport* parse_report = nullptr);

} // namespace hitcast
