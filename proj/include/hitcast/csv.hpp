#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hitcast {

// Minimal CSV reader: comma separator, double-quote quoting with "" escapes,
// LF or CRLF endings, quoted fields may span lines. A UTF-8 BOM on the first
// line is skipped. Blank lines are ignored.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. DataError on an unterminated
    // quoted field.
    std::optional<std::vector<std::string>> next();

    // 1-based physical line on which the last record started.
    std::size_t record_line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
    bool first_ = true;
};

// Quote a field only when needed (comma, quote, CR, LF).
std::string csv_quote(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

// Locale-independent float formatting ('.' decimal separator always).
std::string format_double(double v);                  // shortest round-trip
std::string format_double_fixed(double v, int digits);

} // namespace hitcast
