#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace hitcast {

struct RowReject {
    std::size_t line;  // 1-based physical line in the source file
    std::string reason;
};

// Per-row accounting shared by the CSV ingest paths. Rows that parse but fall
// outside the observation window are dropped and counted, not rejected.
struct ParseReport {
    std::size_t rows_total = 0;
    std::size_t rows_ok = 0;
    std::size_t rows_rejected = 0;
    std::size_t rows_out_of_window = 0;
    std::vector<RowReject> rejects;

    void add_reject(std::size_t line, std::string reason);
    // "line,reason" CSV, one row per reject.
    void write_rejects_csv(std::ostream& out) const;
};

} // namespace hitcast
