#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hitcast {

// The set of tokens treated as a "featuring" credit. Members are stored in
// reduced form (folded, lower-cased, punctuation stripped), so "ft." and "ft"
// are one member. Loadable from a one-token-per-line UTF-8 file to extend the
// built-in set {ft, ft., feat, feat., featuring, featured}.
class FeatTokenSet {
public:
    static const FeatTokenSet& defaults();
    static FeatTokenSet from_tokens(const std::vector<std::string>& tokens);
    static FeatTokenSet load(const std::string& path);  // '#' starts a comment line

    bool matches(std::string_view reduced_core) const {
        return cores_.find(reduced_core) != cores_.end();
    }
    std::size_t size() const { return cores_.size(); }
    const std::set<std::string, std::less<>>& cores() const { return cores_; }

private:
    std::set<std::string, std::less<>> cores_;
};

// Deterministic canonical form used as the join identity across charts,
// scrobbles and audio-feature files. Steps, in order:
//
//   1. compatibility folding of common Unicode variants via a built-in table
//      (accented Latin letters, ligatures, fullwidth forms, typographic
//      punctuation and spaces); unrecognized non-ASCII code points pass
//      through unchanged
//   2. lower-casing
//   3. '&' -> "and"
//   4. every punctuation character except '(' and ')' -> space
//   5. featuring tokens -> the canonical token "feat" (a token is matched
//      with its surrounding parentheses ignored)
//   6. whitespace collapsed to single spaces, ends trimmed, and spaces
//      hugging the inside of parentheses dropped
//
// The result is idempotent and case-insensitive. Returns "" when nothing
// survives; callers treat that as a rejected record.
std::string normalize_text(std::string_view raw,
                           const FeatTokenSet& feat = FeatTokenSet::defaults());

// Canonical (artist, title) identity. Both fields are normalize_text outputs
// and never empty.
struct SongKey {
    std::string artist;
    std::string title;
    auto operator<=>(const SongKey&) const = default;
};

// DataError if either field normalizes to empty.
SongKey make_song_key(std::string_view artist, std::string_view title,
                      const FeatTokenSet& feat = FeatTokenSet::defaults());
std::optional<SongKey> try_make_song_key(std::string_view artist, std::string_view title,
                                         const FeatTokenSet& feat = FeatTokenSet::defaults());

} // namespace hitcast
