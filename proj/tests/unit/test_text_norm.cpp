#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hitcast/errors.hpp"
#include "hitcast/rng.hpp"
#include "hitcast/text_norm.hpp"

using namespace hitcast;

TEST_CASE("normalize_text canonical examples") {
    CHECK(normalize_text("The Artist FT. Guest") == "the artist feat guest");
    CHECK(normalize_text("dance all night  (Radio Edit)") == "dance all night (radio edit)");
    CHECK(normalize_text("Rock & Roll!!") == "rock and roll");
}

TEST_CASE("normalize_text featuring variants collapse to feat") {
    const char* variants[] = {"ft", "ft.", "feat", "feat.", "featuring", "featured",
                              "FT", "Ft.", "FEATURING"};
    for (const char* v : variants)
        CHECK(normalize_text(std::string("a ") + v + " b") == "a feat b");
    // glued to parentheses
    CHECK(normalize_text("tune (ft. guest)") == "tune (feat guest)");
    CHECK(normalize_text("tune (featuring guest)") == "tune (feat guest)");
}

TEST_CASE("normalize_text folds common unicode variants") {
    CHECK(normalize_text("Beyoncé") == "beyonce");           // e acute
    CHECK(normalize_text("BEYONCÉ") == "beyonce");           // E acute
    CHECK(normalize_text("Mötley Crüe") == "motley crue");
    CHECK(normalize_text("“quoted” – dash") == "quoted dash");
    CHECK(normalize_text("ＡＢＣ") == "abc");         // fullwidth
    CHECK(normalize_text("ﬁnal") == "final");                // fi ligature
    CHECK(normalize_text("naïve … song") == "naive song");
}

TEST_CASE("normalize_text empty results") {
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("!!! ???") == "");
    CHECK(normalize_text("   ") == "");
}

TEST_CASE("normalize_text is idempotent and case insensitive on fuzzed input") {
    // larger fuzz corpus lives in the acceptance suite
    const std::string alphabet =
        "abcXYZ019 .,!?&()-_'\"/:;éÜß’“–Ａ ft feat. featuring";
    std::vector<std::string> atoms;
    {
        std::size_t i = 0;
        while (i < alphabet.size()) {
            std::size_t len = 1;
            const auto c = static_cast<unsigned char>(alphabet[i]);
            if (c >= 0xF0) len = 4;
            else if (c >= 0xE0) len = 3;
            else if (c >= 0xC0) len = 2;
            atoms.push_back(alphabet.substr(i, len));
            i += len;
        }
    }
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        const auto len = rng.below(24);
        for (std::uint64_t i = 0; i < len; ++i) s += atoms[rng.below(atoms.size())];

        const std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);

        std::string upper = s;
        for (char& c : upper)
            if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        CHECK(normalize_text(upper) == once);
    }
}

TEST_CASE("featuring token equivalence under substitution") {
    const std::vector<std::string> members{"ft", "ft.", "feat", "feat.", "featuring", "featured"};
    const std::vector<std::string> contexts{"a % b", "% guest", "song (% someone)", "x (%) y"};
    for (const auto& ctx : contexts) {
        std::string first;
        for (const auto& member : members) {
            std::string s = ctx;
            s.replace(s.find('%'), 1, member);
            const std::string norm = normalize_text(s);
            if (first.empty())
                first = norm;
            else
                CHECK(norm == first);
        }
    }
}

TEST_CASE("make_song_key identities and rejection") {
    CHECK(make_song_key("DJ One", "Hit Song") == make_song_key("dj one", "HIT SONG"));
    CHECK(make_song_key("A ft. B", "Tune") == make_song_key("A feat B", "Tune"));
    CHECK_THROWS_AS(make_song_key("", "Tune"), DataError);
    CHECK_THROWS_AS(make_song_key("...", "Tune"), DataError);
    CHECK(try_make_song_key("??", "x") == std::nullopt);
}

TEST_CASE("featuring set is loadable and extensible") {
    const std::string path = "feat_tokens_test.txt";
    {
        std::ofstream out(path);
        out << "# extended set\nft\nft.\nfeat\nmit   # german corpora\n";
    }
    const FeatTokenSet set = FeatTokenSet::load(path);
    CHECK(normalize_text("a mit b", set) == "a feat b");
    // "featuring" is not in the custom set, so it passes through
    CHECK(normalize_text("a featuring b", set) == "a featuring b");
    // the canonical token stays canonical regardless of the set
    CHECK(normalize_text("a feat b", set) == "a feat b");
    std::remove(path.c_str());

    CHECK_THROWS_AS(FeatTokenSet::load("does_not_exist.txt"), DataError);
}
