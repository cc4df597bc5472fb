#include "hitcast/text_norm.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <unordered_map>

#include "hitcast/errors.hpp"

namespace hitcast {

namespace {

// ---------------------------------------------------------------------------
// UTF-8 decode/encode
// ---------------------------------------------------------------------------

// Decodes the code point starting at s[i]; advances i. Invalid bytes decode
// as U+FFFD and consume one byte, so normalization never fails on mojibake.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const unsigned char b = byte(i + static_cast<std::size_t>(k));
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++i;
        return 0xFFFD;
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// ---------------------------------------------------------------------------
// Compatibility fold table
// ---------------------------------------------------------------------------

struct FoldEntry {
    char32_t cp;
    const char* repl;  // ASCII replacement (already lower case for letters)
};

// Common Latin-1 Supplement / Latin Extended-A letters, typographic
// punctuation and spaces, ligatures, super/subscripts. Fullwidth forms are
// handled arithmetically. Everything else passes through unchanged.
constexpr FoldEntry kFoldTable[] = {
    {0x00A0, " "},  {0x00A1, "!"},  {0x00A6, "|"},   {0x00AB, "\""}, {0x00AD, ""},
    {0x00B2, "2"},  {0x00B3, "3"},  {0x00B7, "."},   {0x00B9, "1"},  {0x00BB, "\""},
    {0x00BC, "1/4"}, {0x00BD, "1/2"}, {0x00BE, "3/4"}, {0x00BF, "?"},
    {0x00C0, "a"},  {0x00C1, "a"},  {0x00C2, "a"},   {0x00C3, "a"},  {0x00C4, "a"},
    {0x00C5, "a"},  {0x00C6, "ae"}, {0x00C7, "c"},   {0x00C8, "e"},  {0x00C9, "e"},
    {0x00CA, "e"},  {0x00CB, "e"},  {0x00CC, "i"},   {0x00CD, "i"},  {0x00CE, "i"},
    {0x00CF, "i"},  {0x00D0, "d"},  {0x00D1, "n"},   {0x00D2, "o"},  {0x00D3, "o"},
    {0x00D4, "o"},  {0x00D5, "o"},  {0x00D6, "o"},   {0x00D7, "*"},  {0x00D8, "o"},
    {0x00D9, "u"},  {0x00DA, "u"},  {0x00DB, "u"},   {0x00DC, "u"},  {0x00DD, "y"},
    {0x00DE, "th"}, {0x00DF, "ss"},
    {0x00E0, "a"},  {0x00E1, "a"},  {0x00E2, "a"},   {0x00E3, "a"},  {0x00E4, "a"},
    {0x00E5, "a"},  {0x00E6, "ae"}, {0x00E7, "c"},   {0x00E8, "e"},  {0x00E9, "e"},
    {0x00EA, "e"},  {0x00EB, "e"},  {0x00EC, "i"},   {0x00ED, "i"},  {0x00EE, "i"},
    {0x00EF, "i"},  {0x00F0, "d"},  {0x00F1, "n"},   {0x00F2, "o"},  {0x00F3, "o"},
    {0x00F4, "o"},  {0x00F5, "o"},  {0x00F6, "o"},   {0x00F7, "/"},  {0x00F8, "o"},
    {0x00F9, "u"},  {0x00FA, "u"},  {0x00FB, "u"},   {0x00FC, "u"},  {0x00FD, "y"},
    {0x00FE, "th"}, {0x00FF, "y"},
    // Latin Extended-A
    {0x0100, "a"},  {0x0101, "a"},  {0x0102, "a"},   {0x0103, "a"},  {0x0104, "a"},
    {0x0105, "a"},  {0x0106, "c"},  {0x0107, "c"},   {0x0108, "c"},  {0x0109, "c"},
    {0x010A, "c"},  {0x010B, "c"},  {0x010C, "c"},   {0x010D, "c"},  {0x010E, "d"},
    {0x010F, "d"},  {0x0110, "d"},  {0x0111, "d"},   {0x0112, "e"},  {0x0113, "e"},
    {0x0114, "e"},  {0x0115, "e"},  {0x0116, "e"},   {0x0117, "e"},  {0x0118, "e"},
    {0x0119, "e"},  {0x011A, "e"},  {0x011B, "e"},   {0x011C, "g"},  {0x011D, "g"},
    {0x011E, "g"},  {0x011F, "g"},  {0x0120, "g"},   {0x0121, "g"},  {0x0122, "g"},
    {0x0123, "g"},  {0x0124, "h"},  {0x0125, "h"},   {0x0126, "h"},  {0x0127, "h"},
    {0x0128, "i"},  {0x0129, "i"},  {0x012A, "i"},   {0x012B, "i"},  {0x012C, "i"},
    {0x012D, "i"},  {0x012E, "i"},  {0x012F, "i"},   {0x0130, "i"},  {0x0131, "i"},
    {0x0132, "ij"}, {0x0133, "ij"}, {0x0134, "j"},   {0x0135, "j"},  {0x0136, "k"},
    {0x0137, "k"},  {0x0138, "k"},  {0x0139, "l"},   {0x013A, "l"},  {0x013B, "l"},
    {0x013C, "l"},  {0x013D, "l"},  {0x013E, "l"},   {0x013F, "l"},  {0x0140, "l"},
    {0x0141, "l"},  {0x0142, "l"},  {0x0143, "n"},   {0x0144, "n"},  {0x0145, "n"},
    {0x0146, "n"},  {0x0147, "n"},  {0x0148, "n"},   {0x0149, "n"},  {0x014A, "n"},
    {0x014B, "n"},  {0x014C, "o"},  {0x014D, "o"},   {0x014E, "o"},  {0x014F, "o"},
    {0x0150, "o"},  {0x0151, "o"},  {0x0152, "oe"},  {0x0153, "oe"}, {0x0154, "r"},
    {0x0155, "r"},  {0x0156, "r"},  {0x0157, "r"},   {0x0158, "r"},  {0x0159, "r"},
    {0x015A, "s"},  {0x015B, "s"},  {0x015C, "s"},   {0x015D, "s"},  {0x015E, "s"},
    {0x015F, "s"},  {0x0160, "s"},  {0x0161, "s"},   {0x0162, "t"},  {0x0163, "t"},
    {0x0164, "t"},  {0x0165, "t"},  {0x0166, "t"},   {0x0167, "t"},  {0x0168, "u"},
    {0x0169, "u"},  {0x016A, "u"},  {0x016B, "u"},   {0x016C, "u"},  {0x016D, "u"},
    {0x016E, "u"},  {0x016F, "u"},  {0x0170, "u"},   {0x0171, "u"},  {0x0172, "u"},
    {0x0173, "u"},  {0x0174, "w"},  {0x0175, "w"},   {0x0176, "y"},  {0x0177, "y"},
    {0x0178, "y"},  {0x0179, "z"},  {0x017A, "z"},   {0x017B, "z"},  {0x017C, "z"},
    {0x017D, "z"},  {0x017E, "z"},  {0x017F, "s"},
    // general punctuation and spaces
    {0x2000, " "},  {0x2001, " "},  {0x2002, " "},   {0x2003, " "},  {0x2004, " "},
    {0x2005, " "},  {0x2006, " "},  {0x2007, " "},   {0x2008, " "},  {0x2009, " "},
    {0x200A, " "},  {0x200B, ""},   {0x200C, ""},    {0x200D, ""},   {0x2010, "-"},
    {0x2011, "-"},  {0x2012, "-"},  {0x2013, "-"},   {0x2014, "-"},  {0x2015, "-"},
    {0x2018, "'"},  {0x2019, "'"},  {0x201A, "'"},   {0x201B, "'"},  {0x201C, "\""},
    {0x201D, "\""}, {0x201E, "\""}, {0x201F, "\""},  {0x2022, "."},  {0x2024, "."},
    {0x2025, ".."}, {0x2026, "..."}, {0x2027, "."},  {0x202F, " "},  {0x2032, "'"},
    {0x2033, "\""}, {0x2039, "'"},  {0x203A, "'"},   {0x2044, "/"},  {0x205F, " "},
    {0x2060, ""},
    // super/subscripts
    {0x2070, "0"},  {0x2074, "4"},  {0x2075, "5"},   {0x2076, "6"},  {0x2077, "7"},
    {0x2078, "8"},  {0x2079, "9"},  {0x2080, "0"},   {0x2081, "1"},  {0x2082, "2"},
    {0x2083, "3"},  {0x2084, "4"},  {0x2085, "5"},   {0x2086, "6"},  {0x2087, "7"},
    {0x2088, "8"},  {0x2089, "9"},
    // ideographic space and CJK-width punctuation commonly seen in tags
    {0x3000, " "},  {0x3001, ","},  {0x3002, "."},
    // ligatures
    {0xFB00, "ff"}, {0xFB01, "fi"}, {0xFB02, "fl"},  {0xFB03, "ffi"}, {0xFB04, "ffl"},
    {0xFB05, "st"}, {0xFB06, "st"},
    {0xFEFF, ""},
};

const std::unordered_map<char32_t, const char*>& fold_map() {
    static const auto* map = [] {
        auto* m = new std::unordered_map<char32_t, const char*>();
        for (const auto& e : kFoldTable) (*m)[e.cp] = e.repl;
        return m;
    }();
    return *map;
}

// Fold + lower-case a single code point into `out`.
void fold_codepoint(char32_t cp, std::string& out) {
    // Fullwidth ASCII block folds by offset.
    if (cp >= 0xFF01 && cp <= 0xFF5E) cp -= 0xFEE0;
    if (cp < 0x80) {
        char c = static_cast<char>(cp);
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
        return;
    }
    const auto& m = fold_map();
    if (auto it = m.find(cp); it != m.end()) {
        out += it->second;
        return;
    }
    encode_utf8(cp, out);
}

bool is_ascii_alnum(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

// Reduce a set member or token core for matching: fold, lower, drop
// everything that is not ASCII alphanumeric.
std::string reduce_token(std::string_view raw) {
    std::string folded;
    folded.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) fold_codepoint(decode_utf8(raw, i), folded);
    std::string out;
    for (char c : folded)
        if (is_ascii_alnum(c)) out.push_back(c);
    return out;
}

} // namespace

const FeatTokenSet& FeatTokenSet::defaults() {
    static const FeatTokenSet set = from_tokens(
        {"ft", "ft.", "feat", "feat.", "featuring", "featured"});
    return set;
}

FeatTokenSet FeatTokenSet::from_tokens(const std::vector<std::string>& tokens) {
    FeatTokenSet set;
    for (const auto& t : tokens) {
        std::string core = reduce_token(t);
        if (!core.empty()) set.cores_.insert(std::move(core));
    }
    return set;
}

FeatTokenSet FeatTokenSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open featuring-token file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        tokens.push_back(line.substr(b, e - b + 1));
    }
    FeatTokenSet set = from_tokens(tokens);
    if (set.size() == 0) throw DataError("featuring-token file has no tokens: " + path);
    return set;
}

std::string normalize_text(std::string_view raw, const FeatTokenSet& feat) {
    // Steps 1+2: compatibility fold and lower-case.
    std::string folded;
    folded.reserve(raw.size());
    {
        std::size_t i = 0;
        while (i < raw.size()) fold_codepoint(decode_utf8(raw, i), folded);
    }

    // Steps 3+4: ampersand, then punctuation to space (parentheses kept).
    // Non-ASCII bytes at this point belong to pass-through code points.
    std::string spaced;
    spaced.reserve(folded.size());
    for (char c : folded) {
        const auto uc = static_cast<unsigned char>(c);
        if (uc >= 0x80) {
            spaced.push_back(c);
        } else if (c == '&') {
            spaced += " and ";
        } else if (is_ascii_alnum(c) || c == '(' || c == ')') {
            spaced.push_back(c);
        } else {
            spaced.push_back(' ');
        }
    }

    // Step 5: featuring tokens. A token is a whitespace-delimited run; its
    // leading '(' and trailing ')' runs are ignored for matching so that
    // "(ft" and "featuring" canonicalize alike.
    std::string rebuilt;
    rebuilt.reserve(spaced.size());
    std::size_t pos = 0;
    while (pos < spaced.size()) {
        if (spaced[pos] == ' ') {
            rebuilt.push_back(' ');
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < spaced.size() && spaced[end] != ' ') ++end;
        std::string_view token = std::string_view(spaced).substr(pos, end - pos);
        std::size_t lead = 0;
        while (lead < token.size() && token[lead] == '(') ++lead;
        std::size_t trail = token.size();
        while (trail > lead && token[trail - 1] == ')') --trail;
        const std::string_view core = token.substr(lead, trail - lead);
        if (!core.empty() && feat.matches(core)) {
            rebuilt += token.substr(0, lead);
            rebuilt += "feat";
            rebuilt += token.substr(trail);
        } else {
            rebuilt += token;
        }
        pos = end;
    }

    // Step 6: collapse whitespace; drop spaces hugging the inside of parens.
    std::string out;
    out.reserve(rebuilt.size());
    bool pending_space = false;
    for (char c : rebuilt) {
        if (c == ' ') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            if (c != ')' && out.back() != '(') out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

SongKey make_song_key(std::string_view artist, std::string_view title, const FeatTokenSet& feat) {
    SongKey key{normalize_text(artist, feat), normalize_text(title, feat)};
    if (key.artist.empty())
        throw DataError("artist is empty after normalization: '" + std::string(artist) + "'");
    if (key.title.empty())
        throw DataError("title is empty after normalization: '" + std::string(title) + "'");
    return key;
}

std::optional<SongKey> try_make_song_key(std::string_view artist, std::string_view title,
                                         const FeatTokenSet& feat) {
    SongKey key{normalize_text(artist, feat), normalize_text(title, feat)};
    if (key.artist.empty() || key.title.empty()) return std::nullopt;
    return key;
}

} // namespace hitcast
