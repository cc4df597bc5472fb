#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitcast/dates.hpp"
#include "hitcast/rejects.hpp"
#include "hitcast/text_norm.hpp"

namespace hitcast {

// One timestamped listening record. Field order gives the cleaning sort
// contract: (timestamp, user, song).
struct Scrobble {
    std::int64_t timestamp = 0;  // epoch seconds UTC
    std::string user;
    SongKey song;
    auto operator<=>(const Scrobble&) const = default;
};

struct ScrobbleParseOptions {
    double max_reject_fraction = 0.10;
    const FeatTokenSet* feat_tokens = nullptr;
};

// CSV with header `timestamp,user,artist,title`; timestamps ISO 8601 with 'Z'
// or a numeric offset. Error handling mirrors parse_chart_csv.
std::vector<Scrobble> parse_scrobbles(std::istream& in, const ScrobbleParseOptions& opt,
                                      ParseReport& report);

struct CleaningSummary {
    std::size_t input = 0;
    std::size_t retained = 0;
    std::size_t dropped_out_of_window = 0;
    std::size_t dropped_duplicate = 0;
    nlohmann::json to_json() const;
};

// Drops scrobbles outside the window and exact duplicates (same user, song
// and timestamp); result sorted by (timestamp, user, song). Idempotent.
std::vector<Scrobble> clean_scrobbles(std::vector<Scrobble> raw, const DateInterval& window,
                                      CleaningSummary& summary);

// `timestamp,user,artist,title` with ...Z timestamps; reparses with zero
// rejects.
void write_scrobbles_csv(std::ostream& out, const std::vector<Scrobble>& scrobbles);

} // namespace hitcast
