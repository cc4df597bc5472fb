#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hitcast {

// FNV-1a (64-bit). Used for manifest input digests and model fingerprints;
// not a cryptographic hash.
class Fnv64 {
public:
    void update(const void* data, std::size_t n);
    void update(std::string_view s) { update(s.data(), s.size()); }
    void update_u64(std::uint64_t v);
    void update_i64(std::int64_t v) { update_u64(static_cast<std::uint64_t>(v)); }
    void update_double(double v);
    std::uint64_t value() const { return h_; }
    std::string hex() const;

private:
    std::uint64_t h_ = 14695981039346656037ull;
};

std::uint64_t fnv1a64(std::string_view s);
std::string to_hex(std::uint64_t v);

// Digest of a file's bytes, as a hex string. Throws DataError if unreadable.
std::string digest_file(const std::string& path);

} // namespace hitcast
