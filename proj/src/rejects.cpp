#include "hitcast/rejects.hpp"

#include <ostream>

#include "hitcast/csv.hpp"

namespace hitcast {

void ParseReport::add_reject(std::size_t line, std::string reason) {
    ++rows_rejected;
    rejects.push_back(RowReject{line, std::move(reason)});
}

void ParseReport::write_rejects_csv(std::ostream& out) const {
    out << "line,reason\n";
    for (const auto& r : rejects)
        out << r.line << ',' << csv_quote(r.reason) << '\n';
}

} // namespace hitcast
