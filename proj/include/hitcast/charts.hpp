#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitcast/dates.hpp"
#include "hitcast/rejects.hpp"
#include "hitcast/text_norm.hpp"

namespace hitcast {

enum class ChartKind { main, bubbling };

// One row of a weekly chart listing.
struct ChartEntry {
    Date week_start;  // Monday; input dates are floored to their week's Monday
    ChartKind kind = ChartKind::main;
    int position = 1;  // >= 1; <= 50 for main, <= 20 for bubbling
    SongKey song;
};

struct ChartParseOptions {
    std::optional<DateInterval> window;  // entries outside are dropped + counted
    double max_reject_fraction = 0.10;
    const FeatTokenSet* feat_tokens = nullptr;  // nullptr -> built-in defaults
};

// CSV with header `week_start,chart,position,artist,title`. Malformed rows are
// collected into `report` with line numbers; a missing or wrong header is
// fatal (DataError), as is a reject fraction above the configured ceiling.
std::vector<ChartEntry> parse_chart_csv(std::istream& in, const ChartParseOptions& opt,
                                        ParseReport& report);

enum class SongClass { hit, nonhit };

struct Label {
    SongClass cls = SongClass::nonhit;
    std::optional<Date> first_hit_week;  // present iff cls == hit
};

// Per-song outcome table. Immutable after construction; iteration order is
// the SongKey order, so serialization is independent of input entry order.
class LabelTable {
public:
    using Map = std::map<SongKey, Label>;

    LabelTable() = default;
    explicit LabelTable(Map songs) : songs_(std::move(songs)) {}

    const Map& songs() const { return songs_; }
    const Label* find(const SongKey& key) const;
    std::size_t size() const { return songs_.size(); }
    std::size_t hit_count() const;
    std::size_t nonhit_count() const { return songs_.size() - hit_count(); }

    nlohmann::json to_json() const;
    static LabelTable from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static LabelTable load(const std::string& path);

private:
    Map songs_;
};

struct LabelSummary {
    std::size_t entries = 0;        // chart rows consumed
    std::size_t unique_songs = 0;   // distinct song keys seen
    std::size_t hits = 0;
    std::size_t nonhits = 0;
    std::size_t excluded = 0;       // main-chart-only songs above top_n
};

// A song is a hit iff it ever appears in a main chart at position <= top_n;
// first_hit_week is the earliest such week. A song is a non-hit iff it
// appears in the bubbling chart and never qualifies as a hit. Songs seen only
// in main charts below top_n are excluded.
LabelTable build_label_table(const std::vector<ChartEntry>& entries, int top_n,
                             LabelSummary* summary = nullptr);

} // namespace hitcast
