#include "hitcast/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

#include "hitcast/csv.hpp"
#include "hitcast/digest.hpp"
#include "hitcast/errors.hpp"

namespace fs = std::filesystem;

namespace hitcast {

namespace {

std::size_t count_missing(const std::vector<SparseRow>& rows) {
    std::size_t n = 0;
    for (const auto& row : rows)
        for (const auto& [col, v] : row)
            if (std::isnan(v)) ++n;
    return n;
}

std::optional<double> parse_cell(std::string_view s) {
    if (s.empty() || s == "nan" || s == "NaN" || s == "NA")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_index(std::string_view s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
}

} // namespace

Dataset Dataset::make(std::string name, std::vector<InstanceId> instances,
                      std::vector<std::string> feature_names, std::vector<int> labels,
                      std::vector<SparseRow> rows, Storage storage) {
    if (instances.size() != labels.size() || instances.size() != rows.size())
        throw DataError("dataset: instances, labels and rows must have equal length");
    {
        std::unordered_set<std::string_view> seen;
        for (const auto& n : feature_names) {
            if (n.empty()) throw DataError("dataset: empty feature name");
            if (!seen.insert(n).second) throw DataError("dataset: duplicate feature name '" + n + "'");
        }
    }
    const auto d = static_cast<std::int32_t>(feature_names.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError("dataset: label outside {0,1} at row " + std::to_string(i));
        std::int32_t prev = -1;
        for (const auto& [col, v] : rows[i]) {
            if (col <= prev || col >= d)
                throw DataError("dataset: bad column index at row " + std::to_string(i));
            if (std::isinf(v))
                throw DataError("dataset: infinite value at row " + std::to_string(i));
            prev = col;
        }
    }

    Dataset out;
    out.name_ = std::move(name);
    out.instances_ = std::move(instances);
    out.feature_names_ = std::move(feature_names);
    out.labels_ = std::move(labels);
    out.rows_ = std::move(rows);
    out.storage_ = storage;
    out.missing_ = count_missing(out.rows_);
    return out;
}

double Dataset::cell(std::size_t i, std::size_t j) const {
    const auto& row = rows_.at(i);
    const auto it = std::lower_bound(
        row.begin(), row.end(), static_cast<std::int32_t>(j),
        [](const auto& entry, std::int32_t col) { return entry.first < col; });
    if (it != row.end() && it->first == static_cast<std::int32_t>(j)) return it->second;
    return 0.0;
}

void Dataset::fill_dense_row(std::size_t i, std::span<double> out) const {
    if (out.size() != n_features()) throw InternalError("fill_dense_row: bad span size");
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [col, v] : rows_[i]) out[static_cast<std::size_t>(col)] = v;
}

std::size_t Dataset::positives() const {
    std::size_t n = 0;
    for (int y : labels_) n += static_cast<std::size_t>(y);
    return n;
}

std::uint64_t Dataset::digest() const {
    Fnv64 h;
    for (const auto& n : feature_names_) {
        h.update(n);
        h.update("\x1f");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        h.update(instances_[i].song.artist);
        h.update("\x1f");
        h.update(instances_[i].song.title);
        h.update("\x1f");
        h.update_i64(instances_[i].week_start ? instances_[i].week_start->days() : -1);
        h.update_i64(labels_[i]);
        for (const auto& [col, v] : rows_[i]) {
            h.update_i64(col);
            h.update_double(v);
        }
    }
    return h.value();
}

void Dataset::save(const std::string& dir) const {
    fs::create_directories(dir);
    const bool sparse = storage_ == Storage::sparse;
    if (sparse && missing_ > 0)
        throw InternalError("sparse serialization cannot carry missing markers");

    nlohmann::json instances = nlohmann::json::array();
    for (const auto& inst : instances_) {
        nlohmann::json j{{"artist", inst.song.artist}, {"title", inst.song.title}};
        if (inst.week_start) j["week_start"] = inst.week_start->iso();
        instances.push_back(std::move(j));
    }
    nlohmann::json meta{
        {"name", name_},
        {"storage", sparse ? "sparse" : "dense"},
        {"feature_names", feature_names_},
        {"labels", labels_},
        {"instances", std::move(instances)},
        {"missing_count", missing_},
        {"digest", to_hex(digest())},
    };
    if (!build_info_.is_null()) meta["build"] = build_info_;
    {
        std::ofstream out(fs::path(dir) / "meta.json", std::ios::binary);
        if (!out) throw DataError("cannot write dataset meta: " + dir);
        out << meta.dump(2) << '\n';
    }

    const fs::path values_path =
        fs::path(dir) / (sparse ? "features.sparse.csv" : "features.csv");
    std::ofstream out(values_path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset values: " + values_path.string());
    if (sparse) {
        out << "row,col,value\n";
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (const auto& [col, v] : rows_[i])
                out << i << ',' << col << ',' << format_double(v) << '\n';
    } else {
        std::vector<double> dense(n_features());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            // missing cells serialize as empty fields
            std::fill(dense.begin(), dense.end(), 0.0);
            std::vector<bool> is_missing(n_features(), false);
            for (const auto& [col, v] : rows_[i]) {
                if (std::isnan(v))
                    is_missing[static_cast<std::size_t>(col)] = true;
                else
                    dense[static_cast<std::size_t>(col)] = v;
            }
            for (std::size_t j = 0; j < dense.size(); ++j) {
                if (j) out << ',';
                if (!is_missing[j]) out << format_double(dense[j]);
            }
            out << '\n';
        }
    }
}

Dataset Dataset::load(const std::string& dir) {
    nlohmann::json meta;
    {
        std::ifstream in(fs::path(dir) / "meta.json", std::ios::binary);
        if (!in) throw DataError("cannot open dataset meta: " + dir + "/meta.json");
        try {
            in >> meta;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("dataset meta: ") + e.what());
        }
    }
    try {
        const std::string storage_str = meta.at("storage").get<std::string>();
        if (storage_str != "dense" && storage_str != "sparse")
            throw DataError("dataset meta: unknown storage '" + storage_str + "'");
        const Storage storage = storage_str == "sparse" ? Storage::sparse : Storage::dense;

        std::vector<std::string> names = meta.at("feature_names").get<std::vector<std::string>>();
        std::vector<int> labels = meta.at("labels").get<std::vector<int>>();
        std::vector<InstanceId> instances;
        for (const auto& j : meta.at("instances")) {
            InstanceId inst;
            inst.song = SongKey{j.at("artist").get<std::string>(), j.at("title").get<std::string>()};
            if (j.contains("week_start"))
                inst.week_start = Date::parse(j.at("week_start").get<std::string>());
            instances.push_back(std::move(inst));
        }

        const fs::path values_path =
            fs::path(dir) / (storage == Storage::sparse ? "features.sparse.csv" : "features.csv");
        std::ifstream in(values_path, std::ios::binary);
        if (!in) throw DataError("cannot open dataset values: " + values_path.string());

        std::vector<SparseRow> rows(instances.size());
        if (storage == Storage::sparse) {
            CsvReader reader(in);
            const auto header = reader.next();
            if (!header || *header != std::vector<std::string>{"row", "col", "value"})
                throw DataError("features.sparse.csv: bad header");
            while (auto rec = reader.next()) {
                if (rec->size() != 3)
                    throw DataError("features.sparse.csv: bad record on line " +
                                    std::to_string(reader.record_line()));
                const auto i = parse_index((*rec)[0]);
                const auto col = parse_index((*rec)[1]);
                const auto v = parse_cell((*rec)[2]);
                if (!i || !col || static_cast<std::size_t>(*i) >= rows.size() || !v)
                    throw DataError("features.sparse.csv: bad triple on line " +
                                    std::to_string(reader.record_line()));
                rows[static_cast<std::size_t>(*i)].emplace_back(static_cast<std::int32_t>(*col),
                                                                *v);
            }
            for (auto& row : rows)
                std::sort(row.begin(), row.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
        } else {
            CsvReader reader(in);
            std::size_t i = 0;
            while (auto rec = reader.next()) {
                if (i >= rows.size()) throw DataError("features.csv: more rows than instances");
                if (rec->size() != names.size())
                    throw DataError("features.csv: wrong column count on line " +
                                    std::to_string(reader.record_line()));
                for (std::size_t j = 0; j < rec->size(); ++j) {
                    const auto v = parse_cell((*rec)[j]);
                    if (!v)
                        throw DataError("features.csv: bad number on line " +
                                        std::to_string(reader.record_line()));
                    if (std::isnan(*v) || *v != 0.0)
                        rows[i].emplace_back(static_cast<std::int32_t>(j), *v);
                }
                ++i;
            }
            if (i != rows.size()) throw DataError("features.csv: fewer rows than instances");
        }

        Dataset d = make(meta.value("name", std::string("dataset")), std::move(instances),
                         std::move(names), std::move(labels), std::move(rows), storage);
        if (meta.contains("build")) d.set_build_info(meta["build"]);
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("dataset meta: ") + e.what());
    }
}

Dataset filter_features(const Dataset& d, const std::set<std::string>& drop) {
    if (drop.empty()) return d;
    std::vector<std::string> unknown;
    for (const auto& name : drop)
        if (std::find(d.feature_names().begin(), d.feature_names().end(), name) ==
            d.feature_names().end())
            unknown.push_back(name);
    if (!unknown.empty()) {
        std::string msg = "filter_features: unknown feature names:";
        for (const auto& n : unknown) msg += " '" + n + "'";
        throw DataError(msg);
    }

    std::vector<std::string> kept_names;
    std::vector<std::int32_t> col_map(d.n_features(), -1);
    for (std::size_t j = 0; j < d.n_features(); ++j) {
        if (drop.count(d.feature_names()[j])) continue;
        col_map[j] = static_cast<std::int32_t>(kept_names.size());
        kept_names.push_back(d.feature_names()[j]);
    }
    if (kept_names.empty()) throw DataError("filter_features: dropping every feature");

    std::vector<SparseRow> rows;
    rows.reserve(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        SparseRow row;
        row.reserve(d.row(i).size());
        for (const auto& [col, v] : d.row(i)) {
            const auto mapped = col_map[static_cast<std::size_t>(col)];
            if (mapped >= 0) row.emplace_back(mapped, v);
        }
        rows.push_back(std::move(row));
    }
    Dataset out = Dataset::make(d.name(), d.instances(), std::move(kept_names), d.labels(),
                                std::move(rows), d.storage());
    out.set_build_info(d.build_info());
    return out;
}

} // namespace hitcast
