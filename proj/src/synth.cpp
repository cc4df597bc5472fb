#include "hitcast/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include "hitcast/errors.hpp"
#include "hitcast/rng.hpp"

namespace hitcast {

void SynthConfig::validate() const {
    if (n_songs < 1) throw UsageError("synth: n_songs must be >= 1");
    if (n_hit_songs < 0 || n_hit_songs > n_songs)
        throw UsageError("synth: n_hit_songs must lie in [0, n_songs]");
    if (n_hit_songs == 0 || n_hit_songs == n_songs)
        throw UsageError("synth: both classes must be non-empty "
                         "(0 < n_hit_songs < n_songs)");
    if (n_users < 1) throw UsageError("synth: n_users must be >= 1");
    if (n_early_adopters < 0 || n_early_adopters > n_users)
        throw UsageError("synth: n_early_adopters must lie in [0, n_users]");
    if (weeks < 1) throw UsageError("synth: weeks must be >= 1");
    if (lead_weeks < 0 || lead_weeks >= weeks)
        throw UsageError("synth: lead_weeks must lie in [0, weeks)");
    if (adopter_strength < 0) throw UsageError("synth: adopter_strength must be >= 0");
    if (background_rate < 0) throw UsageError("synth: background_rate must be >= 0");
    if (top_n < 1 || top_n > 50) throw UsageError("synth: top_n must lie in [1, 50]");
    if (!start.is_monday()) throw UsageError("synth: start must be a Monday");
}

nlohmann::json SynthConfig::to_json() const {
    return nlohmann::json{{"n_songs", n_songs},
                          {"n_hit_songs", n_hit_songs},
                          {"n_users", n_users},
                          {"n_early_adopters", n_early_adopters},
                          {"weeks", weeks},
                          {"adopter_strength", adopter_strength},
                          {"background_rate", background_rate},
                          {"lead_weeks", lead_weeks},
                          {"seed", seed},
                          {"top_n", top_n},
                          {"start", start.iso()}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
    try {
        SynthConfig cfg;
        cfg.n_songs = j.value("n_songs", cfg.n_songs);
        cfg.n_hit_songs = j.value("n_hit_songs", cfg.n_hit_songs);
        cfg.n_users = j.value("n_users", cfg.n_users);
        cfg.n_early_adopters = j.value("n_early_adopters", cfg.n_early_adopters);
        cfg.weeks = j.value("weeks", cfg.weeks);
        cfg.adopter_strength = j.value("adopter_strength", cfg.adopter_strength);
        cfg.background_rate = j.value("background_rate", cfg.background_rate);
        cfg.lead_weeks = j.value("lead_weeks", cfg.lead_weeks);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.top_n = j.value("top_n", cfg.top_n);
        if (j.contains("start")) cfg.start = Date::parse(j["start"].get<std::string>());
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("synth config: ") + e.what());
    }
}

SynthConfig SynthConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open synth config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("synth config " + path + ": " + e.what());
    }
    return from_json(j);
}

namespace {

std::string padded_name(const char* stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s %04zu", stem, i);
    return buf;
}

std::vector<bool> seeded_sample(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<bool> chosen(n, false);
    for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;
    return chosen;
}

} // namespace

SynthOutput generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const auto n_songs = static_cast<std::size_t>(cfg.n_songs);
    const auto n_users = static_cast<std::size_t>(cfg.n_users);
    const auto weeks = static_cast<std::size_t>(cfg.weeks);

    // Names are already in canonical form, so ingest keys match truth keys.
    std::vector<std::string> artists(n_songs), titles(n_songs), users(n_users);
    for (std::size_t s = 0; s < n_songs; ++s) {
        artists[s] = padded_name("artist", s);
        titles[s] = padded_name("song", s);
    }
    for (std::size_t u = 0; u < n_users; ++u) users[u] = padded_name("user", u);

    const std::vector<bool> is_hit =
        seeded_sample(n_songs, static_cast<std::size_t>(cfg.n_hit_songs), rng);
    const std::vector<bool> is_adopter =
        seeded_sample(n_users, static_cast<std::size_t>(cfg.n_early_adopters), rng);

    // Chart-entry week per hit song, uniform in [lead_weeks, weeks).
    std::vector<std::int64_t> entry_week(n_songs, -1);
    for (std::size_t s = 0; s < n_songs; ++s)
        if (is_hit[s])
            entry_week[s] = cfg.lead_weeks +
                            static_cast<std::int64_t>(rng.below(
                                static_cast<std::uint64_t>(cfg.weeks - cfg.lead_weeks)));

    // Roughly half the hit songs also get one pre-entry bubbling appearance;
    // the labeler must filter these out of the non-hit pool.
    std::vector<std::int64_t> hit_bubble_week(n_songs, -1);
    for (std::size_t s = 0; s < n_songs; ++s) {
        if (!is_hit[s] || entry_week[s] == 0) continue;
        if (rng.below(2) == 0)
            hit_bubble_week[s] =
                static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(entry_week[s])));
    }

    // Non-hit songs appear in the bubbling chart in 1-3 distinct weeks.
    std::vector<std::vector<std::int64_t>> bubble_weeks(n_songs);
    for (std::size_t s = 0; s < n_songs; ++s) {
        if (is_hit[s]) continue;
        const std::uint64_t appearances = 1 + rng.below(3);
        auto& ws = bubble_weeks[s];
        for (std::uint64_t a = 0; a < appearances; ++a) {
            const auto w = static_cast<std::int64_t>(rng.below(weeks));
            if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
        }
        std::sort(ws.begin(), ws.end());
    }

    const auto week_start = [&](std::int64_t w) { return cfg.start.plus_days(7 * w); };

    // Chart rows, week-major: main rows then bubbling rows.
    std::string chart_csv = "week_start,chart,position,artist,title\n";
    for (std::int64_t w = 0; w < cfg.weeks; ++w) {
        const std::string week_iso = week_start(w).iso();
        for (std::size_t s = 0; s < n_songs; ++s) {
            if (!is_hit[s] || entry_week[s] > w) continue;
            const auto pos = 1 + rng.below(static_cast<std::uint64_t>(cfg.top_n));
            chart_csv += week_iso + ",main," + std::to_string(pos) + ',' + artists[s] + ',' +
                         titles[s] + '\n';
        }
        for (std::size_t s = 0; s < n_songs; ++s) {
            const bool bubbling =
                is_hit[s] ? hit_bubble_week[s] == w
                          : std::find(bubble_weeks[s].begin(), bubble_weeks[s].end(), w) !=
                                bubble_weeks[s].end();
            if (!bubbling) continue;
            const auto pos = 1 + rng.below(20);
            chart_csv += week_iso + ",bubbling," + std::to_string(pos) + ',' + artists[s] + ',' +
                         titles[s] + '\n';
        }
    }

    // Scrobbles, song-major: Poisson background for every (user, week), plus
    // the planted adopter signal in the lead window of future hits.
    std::string scrobble_csv = "timestamp,user,artist,title\n";
    for (std::size_t s = 0; s < n_songs; ++s) {
        for (std::size_t u = 0; u < n_users; ++u) {
            for (std::int64_t w = 0; w < cfg.weeks; ++w) {
                std::uint64_t count = rng.poisson(cfg.background_rate);
                if (is_adopter[u] && is_hit[s] && w >= entry_week[s] - cfg.lead_weeks &&
                    w < entry_week[s])
                    count += rng.poisson(cfg.adopter_strength);
                const std::int64_t base = week_start(w).days() * 86400;
                for (std::uint64_t i = 0; i < count; ++i) {
                    const auto ts = base + static_cast<std::int64_t>(rng.below(7 * 86400));
                    scrobble_csv += format_timestamp(ts) + ',' + users[u] + ',' + artists[s] +
                                    ',' + titles[s] + '\n';
                }
            }
        }
    }

    nlohmann::json hits = nlohmann::json::array();
    for (std::size_t s = 0; s < n_songs; ++s) {
        if (!is_hit[s]) continue;
        hits.push_back({{"artist", artists[s]},
                        {"title", titles[s]},
                        {"entry_week", week_start(entry_week[s]).iso()}});
    }
    nlohmann::json adopters = nlohmann::json::array();
    for (std::size_t u = 0; u < n_users; ++u)
        if (is_adopter[u]) adopters.push_back(users[u]);

    const DateInterval window =
        DateInterval::make(cfg.start, cfg.start.plus_days(7 * cfg.weeks - 1));
    SynthOutput out;
    out.chart_csv = std::move(chart_csv);
    out.scrobble_csv = std::move(scrobble_csv);
    out.truth = nlohmann::json{{"config", cfg.to_json()},
                               {"window", window.str()},
                               {"hits", std::move(hits)},
                               {"adopters", std::move(adopters)}};
    return out;
}

} // namespace hitcast
