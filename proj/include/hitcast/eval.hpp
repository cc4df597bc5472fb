#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitcast/dataset.hpp"
#include "hitcast/learners.hpp"

namespace hitcast {

// Row -> fold partition with per-class counts balanced to within one.
struct FoldAssignment {
    int k = 0;
    std::vector<int> fold_of;  // size n, values in [0, k)

    std::vector<std::size_t> rows_in_fold(int fold) const;
    std::vector<std::size_t> rows_not_in_fold(int fold) const;
};

// Within each class, rows are seed-shuffled then dealt round-robin.
// Errors if any class has fewer than k members.
FoldAssignment stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed);

// ROC points from (0,0) to (1,1); tied scores move diagonally in one step,
// which makes the trapezoidal AUC equal to the Mann-Whitney statistic
// P(score+ > score-) + 1/2 P(score+ = score-).
struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr)
    double auc = 0.0;

    void validate() const;  // InternalError on a violated shape invariant
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

struct CvReport {
    std::string dataset_name;
    ModelSpec spec;
    int k = 10;
    std::uint64_t fold_seed = 42;
    std::vector<double> per_fold_auc;
    double mean_auc = 0.0;    // arithmetic mean of per_fold_auc (the headline number)
    RocCurve pooled_roc;      // all held-out (score, label) pairs concatenated
    double pooled_auc = 0.0;
    std::vector<std::string> fold_model_fingerprints;
    std::string dataset_digest;
    std::size_t n_rows = 0, n_features = 0, positives = 0, negatives = 0;

    nlohmann::json to_json() const;
    static CvReport from_json(const nlohmann::json& j);
};

// Stratified k-fold cross-validation: per fold, train on the other k-1 folds
// (imputation and standardization from training rows only) and score the
// held-out fold. Deterministic per (spec, data, k, seed).
CvReport cross_validate(const ModelSpec& spec, const Dataset& data, int k = 10,
                        std::uint64_t seed = 42);

// Writes auc_table.csv (rows = datasets, columns = algorithms),
// roc_<name>.csv and roc_<name>.svg per report, and run.json.
void emit_report(const std::vector<CvReport>& reports, const std::string& out_dir);

} // namespace hitcast
