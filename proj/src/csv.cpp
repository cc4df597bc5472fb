#include "hitcast/csv.hpp"

#include <charconv>
#include <istream>

#include "hitcast/errors.hpp"

namespace hitcast {

std::optional<std::vector<std::string>> CsvReader::next() {
    std::string raw;
    // Skip blank lines.
    while (true) {
        if (!std::getline(in_, raw)) return std::nullopt;
        ++line_;
        if (first_) {
            first_ = false;
            if (raw.size() >= 3 && raw[0] == '\xEF' && raw[1] == '\xBB' && raw[2] == '\xBF')
                raw.erase(0, 3);
        }
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (!raw.empty()) break;
    }
    record_line_ = line_;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i >= raw.size()) {
            if (quoted) {
                // Quoted field continues on the next physical line.
                std::string more;
                if (!std::getline(in_, more))
                    throw DataError("line " + std::to_string(record_line_) +
                                    ": unterminated quoted field");
                ++line_;
                if (!more.empty() && more.back() == '\r') more.pop_back();
                field.push_back('\n');
                raw = std::move(more);
                i = 0;
                continue;
            }
            break;
        }
        const char c = raw[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < raw.size() && raw[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++i;
        } else {
            field.push_back(c);
            ++i;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_quote(std::string_view field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_quote(fields[i]);
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_double_fixed(double v, int digits) {
    char buf[80];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

} // namespace hitcast
