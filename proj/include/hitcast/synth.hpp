#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hitcast/dates.hpp"

namespace hitcast {

// Synthetic chart + scrobble corpus with planted early adopters: a seeded
// subset of users whose listens to future hits start lead_weeks before the
// chart entry, on top of Poisson background listening for everyone.
struct SynthConfig {
    int n_songs = 200;
    int n_hit_songs = 40;
    int n_users = 300;
    int n_early_adopters = 30;
    int weeks = 12;
    double adopter_strength = 2.0;   // expected extra weekly listens per adopter per future hit
    double background_rate = 0.2;    // expected weekly listens for any user/song pair
    int lead_weeks = 6;
    std::uint64_t seed = 42;
    int top_n = 20;
    Date start = Date::from_days(15810);  // 2013-04-15, a Monday; week 0 anchor

    void validate() const;  // UsageError on violated invariants
    nlohmann::json to_json() const;
    static SynthConfig from_json(const nlohmann::json& j);
    static SynthConfig load(const std::string& path);
};

struct SynthOutput {
    std::string chart_csv;
    std::string scrobble_csv;
    nlohmann::json truth;  // hit set, entry weeks, adopter ids, window, config
};

// Bit-reproducible per seed; output round-trips through the ingest modules
// with zero rejects.
SynthOutput generate(const SynthConfig& config);

} // namespace hitcast
