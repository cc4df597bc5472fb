#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitcast/dates.hpp"
#include "hitcast/text_norm.hpp"

namespace hitcast {

// What a matrix row describes: a (song, week) listening instance or a
// per-song audio instance (no week).
struct InstanceId {
    SongKey song;
    std::optional<Date> week_start;
    auto operator<=>(const InstanceId&) const = default;
};

// Row-sparse cell storage: (column, value) sorted by column, absent = 0.
// NaN is the explicit missing-value marker (audio datasets only); it is
// resolved by training-fold mean imputation at evaluation time.
using SparseRow = std::vector<std::pair<std::int32_t, double>>;

class Dataset {
public:
    enum class Storage { dense, sparse };

    Dataset() = default;

    // Validates the shape invariants (sizes, unique names, sorted columns,
    // no infinities, labels in {0,1}) and throws DataError on violation.
    static Dataset make(std::string name, std::vector<InstanceId> instances,
                        std::vector<std::string> feature_names, std::vector<int> labels,
                        std::vector<SparseRow> rows, Storage storage);

    const std::string& name() const { return name_; }
    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_features() const { return feature_names_.size(); }
    const std::vector<InstanceId>& instances() const { return instances_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<int>& labels() const { return labels_; }
    const SparseRow& row(std::size_t i) const { return rows_[i]; }
    Storage storage() const { return storage_; }

    double cell(std::size_t i, std::size_t j) const;
    // Writes all n_features() values of row i (zeros included) into out.
    void fill_dense_row(std::size_t i, std::span<double> out) const;

    std::size_t positives() const;
    std::size_t negatives() const { return n_rows() - positives(); }
    std::size_t missing_count() const { return missing_; }
    bool has_missing() const { return missing_ > 0; }

    // Content digest over names, instances, labels and cells.
    std::uint64_t digest() const;

    const nlohmann::json& build_info() const { return build_info_; }
    void set_build_info(nlohmann::json info) { build_info_ = std::move(info); }
    void set_name(std::string name) { name_ = std::move(name); }

    // Directory layout: meta.json plus features.csv (dense) or
    // features.sparse.csv (row,col,value triples).
    void save(const std::string& dir) const;
    static Dataset load(const std::string& dir);

private:
    std::string name_ = "dataset";
    std::vector<InstanceId> instances_;
    std::vector<std::string> feature_names_;
    std::vector<int> labels_;
    std::vector<SparseRow> rows_;
    Storage storage_ = Storage::dense;
    std::size_t missing_ = 0;
    nlohmann::json build_info_;
};

// New dataset without the dropped columns; rows, labels and instance ids are
// unchanged. Unknown names or an empty result are fatal.
Dataset filter_features(const Dataset& d, const std::set<std::string>& drop);

} // namespace hitcast
