#include "hitcast/charts.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hitcast/csv.hpp"
#include "hitcast/errors.hpp"

namespace hitcast {

namespace {

const std::vector<std::string> kHeader{"week_start", "chart", "position", "artist", "title"};

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void check_reject_ceiling(const ParseReport& report, double max_fraction) {
    if (report.rows_total == 0) return;
    const double fraction =
        static_cast<double>(report.rows_rejected) / static_cast<double>(report.rows_total);
    if (fraction > max_fraction) {
        std::ostringstream msg;
        msg << "rejected " << report.rows_rejected << " of " << report.rows_total
            << " rows, above the ceiling of " << max_fraction;
        throw DataError(msg.str());
    }
}

} // namespace

std::vector<ChartEntry> parse_chart_csv(std::istream& in, const ChartParseOptions& opt,
                                        ParseReport& report) {
    CsvReader reader(in);
    const auto header = reader.next();
    if (!header || *header != kHeader)
        throw DataError("chart file: missing or wrong header (expected "
                        "week_start,chart,position,artist,title)");

    const FeatTokenSet& feat = opt.feat_tokens ? *opt.feat_tokens : FeatTokenSet::defaults();
    std::vector<ChartEntry> entries;
    while (auto row = reader.next()) {
        ++report.rows_total;
        const std::size_t line = reader.record_line();
        if (row->size() != kHeader.size()) {
            report.add_reject(line, "expected 5 fields, got " + std::to_string(row->size()));
            continue;
        }
        const auto date = Date::try_parse((*row)[0]);
        if (!date) {
            report.add_reject(line, "bad date '" + (*row)[0] + "'");
            continue;
        }
        ChartKind kind;
        if ((*row)[1] == "main") {
            kind = ChartKind::main;
        } else if ((*row)[1] == "bubbling") {
            kind = ChartKind::bubbling;
        } else {
            report.add_reject(line, "bad chart kind '" + (*row)[1] + "'");
            continue;
        }
        const auto pos = parse_int((*row)[2]);
        if (!pos) {
            report.add_reject(line, "bad position '" + (*row)[2] + "'");
            continue;
        }
        const int max_pos = kind == ChartKind::main ? 50 : 20;
        if (*pos < 1 || *pos > max_pos) {
            report.add_reject(line, "position " + std::to_string(*pos) + " out of range [1," +
                                        std::to_string(max_pos) + "]");
            continue;
        }
        const auto song = try_make_song_key((*row)[3], (*row)[4], feat);
        if (!song) {
            report.add_reject(line, "artist/title empty after normalization");
            continue;
        }
        const Date week = date->monday();
        if (opt.window && !opt.window->contains(week)) {
            ++report.rows_out_of_window;
            continue;
        }
        ++report.rows_ok;
        entries.push_back(ChartEntry{week, kind, *pos, *song});
    }
    check_reject_ceiling(report, opt.max_reject_fraction);
    return entries;
}

const Label* LabelTable::find(const SongKey& key) const {
    const auto it = songs_.find(key);
    return it == songs_.end() ? nullptr : &it->second;
}

std::size_t LabelTable::hit_count() const {
    std::size_t n = 0;
    for (const auto& [key, label] : songs_)
        if (label.cls == SongClass::hit) ++n;
    return n;
}

nlohmann::json LabelTable::to_json() const {
    nlohmann::json songs = nlohmann::json::array();
    for (const auto& [key, label] : songs_) {
        nlohmann::json s{{"artist", key.artist},
                         {"title", key.title},
                         {"class", label.cls == SongClass::hit ? "hit" : "nonhit"}};
        if (label.first_hit_week) s["first_hit_week"] = label.first_hit_week->iso();
        songs.push_back(std::move(s));
    }
    return nlohmann::json{{"songs", std::move(songs)}};
}

LabelTable LabelTable::from_json(const nlohmann::json& j) {
    Map map;
    for (const auto& s : j.at("songs")) {
        SongKey key{s.at("artist").get<std::string>(), s.at("title").get<std::string>()};
        Label label;
        const auto cls = s.at("class").get<std::string>();
        if (cls == "hit") {
            label.cls = SongClass::hit;
            label.first_hit_week = Date::parse(s.at("first_hit_week").get<std::string>());
        } else if (cls == "nonhit") {
            label.cls = SongClass::nonhit;
        } else {
            throw DataError("label table: unknown class '" + cls + "'");
        }
        map[key] = label;
    }
    return LabelTable(std::move(map));
}

void LabelTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write label table: " + path);
    out << to_json().dump(2) << '\n';
}

LabelTable LabelTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open label table: " + path);
    nlohmann::json j;
    try {
        in >> j;
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("label table " + path + ": " + e.what());
    }
}

LabelTable build_label_table(const std::vector<ChartEntry>& entries, int top_n,
                             LabelSummary* summary) {
    if (entries.empty()) throw DataError("cannot build label table: no chart entries");
    if (top_n < 1) throw UsageError("top_n must be >= 1");

    struct Seen {
        std::optional<Date> first_top_week;
        bool in_bubbling = false;
    };
    std::map<SongKey, Seen> seen;
    for (const auto& e : entries) {
        Seen& s = seen[e.song];
        if (e.kind == ChartKind::bubbling) {
            s.in_bubbling = true;
        } else if (e.position <= top_n) {
            if (!s.first_top_week || e.week_start < *s.first_top_week)
                s.first_top_week = e.week_start;
        }
    }

    LabelTable::Map map;
    std::size_t excluded = 0;
    for (const auto& [key, s] : seen) {
        if (s.first_top_week) {
            map[key] = Label{SongClass::hit, s.first_top_week};
        } else if (s.in_bubbling) {
            map[key] = Label{SongClass::nonhit, std::nullopt};
        } else {
            ++excluded;  // main chart only, never inside top_n
        }
    }
    LabelTable table(std::move(map));
    if (summary) {
        summary->entries = entries.size();
        summary->unique_songs = seen.size();
        summary->hits = table.hit_count();
        summary->nonhits = table.nonhit_count();
        summary->excluded = excluded;
    }
    return table;
}

} // namespace hitcast
