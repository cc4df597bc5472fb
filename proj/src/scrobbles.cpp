#include "hitcast/scrobbles.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "hitcast/csv.hpp"
#include "hitcast/errors.hpp"

namespace hitcast {

namespace {
const std::vector<std::string> kHeader{"timestamp", "user", "artist", "title"};
}

std::vector<Scrobble> parse_scrobbles(std::istream& in, const ScrobbleParseOptions& opt,
                                      ParseReport& report) {
    CsvReader reader(in);
    const auto header = reader.next();
    if (!header || *header != kHeader)
        throw DataError("scrobble file: missing or wrong header (expected "
                        "timestamp,user,artist,title)");

    const FeatTokenSet& feat = opt.feat_tokens ? *opt.feat_tokens : FeatTokenSet::defaults();
    std::vector<Scrobble> out;
    while (auto row = reader.next()) {
        ++report.rows_total;
        const std::size_t line = reader.record_line();
        if (row->size() != kHeader.size()) {
            report.add_reject(line, "expected 4 fields, got " + std::to_string(row->size()));
            continue;
        }
        const auto ts = try_parse_timestamp((*row)[0]);
        if (!ts) {
            report.add_reject(line, "bad timestamp '" + (*row)[0] + "'");
            continue;
        }
        if ((*row)[1].empty()) {
            report.add_reject(line, "empty user");
            continue;
        }
        const auto song = try_make_song_key((*row)[2], (*row)[3], feat);
        if (!song) {
            report.add_reject(line, "artist/title empty after normalization");
            continue;
        }
        ++report.rows_ok;
        out.push_back(Scrobble{*ts, (*row)[1], *song});
    }
    if (report.rows_total > 0) {
        const double fraction =
            static_cast<double>(report.rows_rejected) / static_cast<double>(report.rows_total);
        if (fraction > opt.max_reject_fraction) {
            std::ostringstream msg;
            msg << "rejected " << report.rows_rejected << " of " << report.rows_total
                << " rows, above the ceiling of " << opt.max_reject_fraction;
            throw DataError(msg.str());
        }
    }
    return out;
}

nlohmann::json CleaningSummary::to_json() const {
    return nlohmann::json{
        {"input", input},
        {"retained", retained},
        {"dropped_by_reason",
         {{"out_of_window", dropped_out_of_window}, {"duplicate", dropped_duplicate}}}};
}

std::vector<Scrobble> clean_scrobbles(std::vector<Scrobble> raw, const DateInterval& window,
                                      CleaningSummary& summary) {
    summary = CleaningSummary{};
    summary.input = raw.size();

    std::erase_if(raw, [&](const Scrobble& s) { return !window.contains_ts(s.timestamp); });
    summary.dropped_out_of_window = summary.input - raw.size();

    std::sort(raw.begin(), raw.end());
    const auto last = std::unique(raw.begin(), raw.end());
    summary.dropped_duplicate = static_cast<std::size_t>(raw.end() - last);
    raw.erase(last, raw.end());

    summary.retained = raw.size();
    return raw;
}

void write_scrobbles_csv(std::ostream& out, const std::vector<Scrobble>& scrobbles) {
    out << "timestamp,user,artist,title\n";
    for (const auto& s : scrobbles) {
        out << format_timestamp(s.timestamp) << ',' << csv_quote(s.user) << ','
            << csv_quote(s.song.artist) << ',' << csv_quote(s.song.title) << '\n';
    }
}

} // namespace hitcast
