#include "hitcast/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hitcast/csv.hpp"
#include "hitcast/errors.hpp"

namespace hitcast {

nlohmann::json JoinReport::to_json() const {
    return nlohmann::json{
        {"songs", {{"seen", songs_seen}, {"kept", songs_kept}, {"dropped", songs_dropped}}},
        {"records",
         {{"seen", records_seen}, {"kept", records_kept}, {"dropped", records_dropped}}},
        {"rows_emitted", rows_emitted},
        {"rows_post_hit_excluded", rows_post_hit_excluded},
        {"positives", positives},
        {"negatives", negatives}};
}

namespace {

void require_both_classes(std::size_t positives, std::size_t negatives,
                          const std::string& what) {
    if (positives == 0)
        throw DataError(what + ": no hit-class rows; both classes are required");
    if (negatives == 0)
        throw DataError(what + ": no nonhit-class rows; both classes are required");
}

} // namespace

Dataset build_listening_dataset(const std::vector<Scrobble>& cleaned, const LabelTable& labels,
                                const ListeningBuildOptions& opt, JoinReport* report) {
    const Date window_monday = opt.window.start.monday();
    const Date window_last_monday = opt.window.end.monday();
    const std::int64_t n_weeks = (window_last_monday.days() - window_monday.days()) / 7 + 1;

    // Group scrobbles by labeled song; drop and count the rest.
    struct SongEvents {
        // user column -> per-week counts, filled lazily
        std::map<std::int32_t, std::map<std::int64_t, std::int64_t>> by_user;
        std::int64_t first_week = std::numeric_limits<std::int64_t>::max();
    };

    JoinReport rep;
    rep.records_seen = cleaned.size();

    // Column order: user ids, lexicographic.
    std::vector<std::string> users;
    for (const auto& s : cleaned) users.push_back(s.user);
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    std::map<std::string, std::int32_t> user_col;
    for (std::size_t j = 0; j < users.size(); ++j)
        user_col[users[j]] = static_cast<std::int32_t>(j);

    std::map<SongKey, SongEvents> songs;
    std::set<SongKey> dropped_songs;
    for (const auto& s : cleaned) {
        const Date week = date_of_timestamp(s.timestamp).monday();
        const std::int64_t w = (week.days() - window_monday.days()) / 7;
        if (w < 0 || w >= n_weeks)
            throw DataError("scrobble outside the build window (clean the input first): " +
                            format_timestamp(s.timestamp));
        if (!labels.find(s.song)) {
            dropped_songs.insert(s.song);
            ++rep.records_dropped;
            continue;
        }
        ++rep.records_kept;
        SongEvents& ev = songs[s.song];
        ev.by_user[user_col[s.user]][w] += 1;
        ev.first_week = std::min(ev.first_week, w);
    }
    rep.songs_seen = songs.size() + dropped_songs.size();
    rep.songs_kept = songs.size();
    rep.songs_dropped = dropped_songs.size();
    if (songs.empty())
        throw DataError("listening dataset: no scrobbled song appears in the label table");

    std::vector<InstanceId> instances;
    std::vector<int> out_labels;
    std::vector<SparseRow> rows;

    for (const auto& [song, ev] : songs) {
        const Label& label = *labels.find(song);

        // Per-user cumulative walk, reused across this song's weeks.
        struct UserCursor {
            std::int32_t col;
            const std::map<std::int64_t, std::int64_t>* counts;
            std::map<std::int64_t, std::int64_t>::const_iterator it;
            std::int64_t running = 0;
        };
        std::vector<UserCursor> cursors;
        cursors.reserve(ev.by_user.size());
        for (const auto& [col, counts] : ev.by_user)
            cursors.push_back(UserCursor{col, &counts, counts.begin(), 0});

        for (std::int64_t w = ev.first_week; w < n_weeks; ++w) {
            const Date week_start = Date::from_days(window_monday.days() + 7 * w);

            int y;
            if (label.cls == SongClass::hit) {
                if (week_start < *label.first_hit_week) {
                    y = 1;
                } else if (opt.include_post_hit) {
                    y = 0;
                } else {
                    ++rep.rows_post_hit_excluded;
                    // advance cumulative cursors even when the row is skipped
                    for (auto& c : cursors)
                        while (c.it != c.counts->end() && c.it->first <= w) {
                            c.running += c.it->second;
                            ++c.it;
                        }
                    continue;
                }
            } else {
                y = 0;
            }

            SparseRow row;
            if (opt.count_mode == CountMode::cumulative) {
                for (auto& c : cursors) {
                    while (c.it != c.counts->end() && c.it->first <= w) {
                        c.running += c.it->second;
                        ++c.it;
                    }
                    if (c.running > 0) row.emplace_back(c.col, static_cast<double>(c.running));
                }
            } else {
                for (const auto& c : cursors) {
                    const auto it = c.counts->find(w);
                    if (it != c.counts->end())
                        row.emplace_back(c.col, static_cast<double>(it->second));
                }
                if (row.empty()) continue;  // weekly mode: row only where listens exist
            }

            instances.push_back(InstanceId{song, week_start});
            out_labels.push_back(y);
            rows.push_back(std::move(row));
        }
    }

    rep.rows_emitted = rows.size();
    for (int y : out_labels) (y ? rep.positives : rep.negatives) += 1;
    require_both_classes(rep.positives, rep.negatives, "listening dataset");
    if (report) *report = rep;

    Dataset d = Dataset::make("listening", std::move(instances), std::move(users),
                              std::move(out_labels), std::move(rows), Dataset::Storage::sparse);
    d.set_build_info(nlohmann::json{
        {"kind", "listening"},
        {"window", opt.window.str()},
        {"count_mode", opt.count_mode == CountMode::cumulative ? "cumulative" : "weekly"},
        {"include_post_hit", opt.include_post_hit},
        {"join", rep.to_json()}});
    return d;
}

Dataset build_audio_dataset(std::istream& in, const LabelTable& labels,
                            const AudioBuildOptions& opt, JoinReport* report,
                            ParseReport* parse_report) {
    if (opt.feature_set == AudioBuildOptions::FeatureSet::audio && opt.meta_feature_names.empty())
        throw DataError("audio feature set requested with an empty meta-feature list; "
                        "the split would be a no-op");

    CsvReader reader(in);
    const auto header = reader.next();
    if (!header || header->size() < 3 || (*header)[0] != "artist" || (*header)[1] != "title")
        throw DataError("audio file: missing or wrong header (expected "
                        "artist,title,<feature>,...)");
    std::vector<std::string> all_features(header->begin() + 2, header->end());
    {
        std::set<std::string_view> seen;
        for (const auto& f : all_features)
            if (f.empty() || !seen.insert(f).second)
                throw DataError("audio file: empty or duplicate feature column '" + f + "'");
    }

    if (opt.feature_set == AudioBuildOptions::FeatureSet::audio) {
        std::vector<std::string> unknown;
        for (const auto& m : opt.meta_feature_names)
            if (std::find(all_features.begin(), all_features.end(), m) == all_features.end())
                unknown.push_back(m);
        if (!unknown.empty()) {
            std::string msg = "meta features not present in the audio file:";
            for (const auto& m : unknown) msg += " '" + m + "'";
            throw DataError(msg);
        }
    }

    // Column selection.
    std::vector<std::string> kept_names;
    std::vector<bool> keep(all_features.size(), true);
    for (std::size_t j = 0; j < all_features.size(); ++j) {
        if (opt.feature_set == AudioBuildOptions::FeatureSet::audio &&
            opt.meta_feature_names.count(all_features[j]))
            keep[j] = false;
        else
            kept_names.push_back(all_features[j]);
    }
    if (kept_names.empty()) throw DataError("audio dataset: no feature columns left");

    const FeatTokenSet& feat = opt.feat_tokens ? *opt.feat_tokens : FeatTokenSet::defaults();
    ParseReport prep;
    JoinReport rep;

    // Rows keyed and ordered by song; first occurrence wins on duplicates.
    std::map<SongKey, SparseRow> by_song;
    std::set<SongKey> seen_songs;
    while (auto row = reader.next()) {
        ++prep.rows_total;
        const std::size_t line = reader.record_line();
        if (row->size() != header->size()) {
            prep.add_reject(line, "expected " + std::to_string(header->size()) +
                                      " fields, got " + std::to_string(row->size()));
            continue;
        }
        const auto song = try_make_song_key((*row)[0], (*row)[1], feat);
        if (!song) {
            prep.add_reject(line, "artist/title empty after normalization");
            continue;
        }
        SparseRow cells;
        bool bad = false;
        std::int32_t out_col = 0;
        for (std::size_t j = 0; j < all_features.size(); ++j) {
            if (!keep[j]) continue;
            const std::string& field = (*row)[j + 2];
            double v;
            if (field.empty() || field == "nan" || field == "NaN" || field == "NA") {
                v = std::numeric_limits<double>::quiet_NaN();
            } else {
                const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
                if (res.ec != std::errc{} || res.ptr != field.data() + field.size() ||
                    std::isinf(v)) {
                    prep.add_reject(line, "bad number '" + field + "' in column '" +
                                              all_features[j] + "'");
                    bad = true;
                    break;
                }
            }
            if (std::isnan(v) || v != 0.0) cells.emplace_back(out_col, v);
            ++out_col;
        }
        if (bad) continue;
        ++prep.rows_ok;
        ++rep.records_seen;
        seen_songs.insert(*song);
        if (!labels.find(*song)) {
            ++rep.records_dropped;
            continue;
        }
        if (by_song.count(*song)) {
            ++rep.records_dropped;  // duplicate song row; first wins
            continue;
        }
        ++rep.records_kept;
        by_song.emplace(*song, std::move(cells));
    }

    if (prep.rows_total > 0) {
        const double fraction =
            static_cast<double>(prep.rows_rejected) / static_cast<double>(prep.rows_total);
        if (fraction > opt.max_reject_fraction) {
            std::ostringstream msg;
            msg << "rejected " << prep.rows_rejected << " of " << prep.rows_total
                << " rows, above the ceiling of " << opt.max_reject_fraction;
            throw DataError(msg.str());
        }
    }
    if (by_song.empty())
        throw DataError("audio dataset: no song overlaps the label table");

    std::vector<InstanceId> instances;
    std::vector<int> out_labels;
    std::vector<SparseRow> rows;
    for (auto& [song, cells] : by_song) {
        const Label& label = *labels.find(song);
        instances.push_back(InstanceId{song, std::nullopt});
        out_labels.push_back(label.cls == SongClass::hit ? 1 : 0);
        rows.push_back(std::move(cells));
    }
    rep.songs_seen = seen_songs.size();
    rep.songs_kept = by_song.size();
    rep.songs_dropped = rep.songs_seen - rep.songs_kept;
    rep.rows_emitted = rows.size();
    for (int y : out_labels) (y ? rep.positives : rep.negatives) += 1;
    require_both_classes(rep.positives, rep.negatives, "audio dataset");
    if (report) *report = rep;
    if (parse_report) *parse_report = prep;

    Dataset d =
        Dataset::make(opt.feature_set == AudioBuildOptions::FeatureSet::audio ? "audio" : "meta",
                      std::move(instances), std::move(kept_names), std::move(out_labels),
                      std::move(rows), Dataset::Storage::dense);
    d.set_build_info(nlohmann::json{
        {"kind", "audio"},
        {"feature_set",
         opt.feature_set == AudioBuildOptions::FeatureSet::audio ? "audio" : "meta"},
        {"meta_feature_names",
         std::vector<std::string>(opt.meta_feature_names.begin(), opt.meta_feature_names.end())},
        {"join", rep.to_json()}});
    return d;
}

} // namespace hitcast
