#include "hitcast/digest.hpp"

#include <fstream>
#include <vector>

#include "hitcast/errors.hpp"

namespace hitcast {

namespace {
constexpr std::uint64_t kPrime = 1099511628211ull;
}

void Fnv64::update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h_ ^= p[i];
        h_ *= kPrime;
    }
}

void Fnv64::update_u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    update(buf, 8);
}

void Fnv64::update_double(double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0 into +0.0
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    update_u64(bits);
}

std::string Fnv64::hex() const { return to_hex(h_); }

std::uint64_t fnv1a64(std::string_view s) {
    Fnv64 h;
    h.update(s);
    return h.value();
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path);
    Fnv64 h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

} // namespace hitcast
