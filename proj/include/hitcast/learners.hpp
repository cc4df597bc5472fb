#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hitcast/dataset.hpp"

namespace hitcast {

enum class Algorithm { logistic, naive_bayes, linear_svm, decision_tree, rule_list };

std::string_view algorithm_name(Algorithm a);        // "logistic", ...
std::string_view algorithm_short_name(Algorithm a);  // "lr", "nb", "svm", "tree", "rules"
std::optional<Algorithm> algorithm_from_name(std::string_view name);  // accepts either form

struct LogisticConfig {
    double l2 = 1e-4;       // L2 strength on weights; bias unregularized
    int max_epochs = 500;
    double tol = 1e-6;      // stop when the loss decrease falls below this
};

struct NaiveBayesConfig {
    double var_floor = 1e-9;
};

struct LinearSvmConfig {
    double c = 1.0;  // fixed default; no tuning
    int epochs = 200;
};

struct DecisionTreeConfig {
    int max_depth = 20;
    int min_leaf = 2;
};

struct RuleListConfig {
    double grow_fraction = 2.0 / 3.0;  // grow/prune split of the covered data
};

struct ModelSpec {
    Algorithm algorithm = Algorithm::logistic;
    std::uint64_t seed = 42;
    LogisticConfig logistic;
    NaiveBayesConfig naive_bayes;
    LinearSvmConfig svm;
    DecisionTreeConfig tree;
    RuleListConfig rules;

    static ModelSpec make(Algorithm a, std::uint64_t seed = 42);
    void validate() const;  // UsageError on out-of-range hyperparameters

    nlohmann::json to_json() const;  // algorithm, seed and the active config only
    static ModelSpec from_json(const nlohmann::json& j);
};

// ---------------------------------------------------------------------------
// Learned parameters
// ---------------------------------------------------------------------------

struct LogisticParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct NaiveBayesParams {
    double log_prior_hit = 0.0;
    double log_prior_non = 0.0;
    std::vector<double> mean_hit, var_hit;
    std::vector<double> mean_non, var_non;
};

struct LinearSvmParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct TreeNode {
    bool leaf = true;
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;   // x <= threshold
    std::int32_t right = -1;  // x >  threshold
    std::int64_t n_hit = 0;
    std::int64_t n_total = 0;
    double score = 0.5;  // Laplace-corrected hit fraction (n_hit+1)/(n_total+2)
};

struct TreeParams {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct RuleCondition {
    std::int32_t feature = 0;
    bool is_ge = true;  // feature >= threshold, else feature <= threshold
    double threshold = 0.0;
};

struct Rule {
    std::vector<RuleCondition> conditions;  // conjunction
    std::int64_t covered_hit = 0;           // coverage on the data it was learned from
    std::int64_t covered_total = 0;
    double score = 0.5;  // Laplace-corrected hit fraction
};

struct RuleListParams {
    std::vector<Rule> rules;  // evaluated in order; default rule last
    std::int64_t default_hit = 0;
    std::int64_t default_total = 0;
    double default_score = 0.5;
};

using ModelParams =
    std::variant<LogisticParams, NaiveBayesParams, LinearSvmParams, TreeParams, RuleListParams>;

// A trained classifier behind one scoring interface: higher score = more
// hit-like. Logistic and NB return posterior probabilities, the SVM a signed
// margin, tree and rule list Laplace-corrected leaf/rule hit fractions.
// Immutable; scoring is safe from any number of threads.
class TrainedModel {
public:
    TrainedModel() = default;
    TrainedModel(ModelSpec spec, ModelParams params, std::vector<double> mean,
                 std::vector<double> sd, std::size_t n_features,
                 std::uint64_t training_fingerprint);

    Algorithm algorithm() const { return spec_.algorithm; }
    const ModelSpec& spec() const { return spec_; }
    std::size_t n_features() const { return n_features_; }
    const ModelParams& params() const { return params_; }

    // Standardization captured from the training rows; empty for the tree
    // and rule-list learners, which operate on raw feature values.
    const std::vector<double>& feature_mean() const { return mean_; }
    const std::vector<double>& feature_sd() const { return sd_; }

    double score(std::span<const double> x) const;  // DataError on dimension mismatch
    std::vector<double> score_rows(const Dataset& data) const;
    std::vector<double> score_rows(const Dataset& data, std::span<const std::size_t> rows) const;

    // Digest of the training rows the model actually saw.
    std::uint64_t training_fingerprint() const { return training_fingerprint_; }
    // Digest of the learned parameters (standardization included).
    std::uint64_t params_fingerprint() const;

    nlohmann::json to_json() const;
    static TrainedModel from_json(const nlohmann::json& j);

private:
    ModelSpec spec_;
    ModelParams params_;
    std::vector<double> mean_, sd_;
    std::size_t n_features_ = 0;
    std::uint64_t training_fingerprint_ = 0;
};

// Trains spec.algorithm on the given rows. Deterministic per (spec, data,
// row_subset). The subset must contain both classes; features must be finite
// (impute missing values first).
TrainedModel train(const ModelSpec& spec, const Dataset& data,
                   std::span<const std::size_t> row_subset);

// Convenience: train on every row.
TrainedModel train(const ModelSpec& spec, const Dataset& data);

// ---------------------------------------------------------------------------
// Internal dense representation, exposed for the evaluation module, which
// performs per-fold imputation before training.
// ---------------------------------------------------------------------------
namespace detail {

struct DenseBlock {
    std::size_t n = 0, d = 0;
    std::vector<double> x;  // row-major n x d
    std::vector<int> y;     // 0/1
    double* row(std::size_t i) { return x.data() + i * d; }
    const double* row(std::size_t i) const { return x.data() + i * d; }
    std::uint64_t fingerprint() const;
};

DenseBlock materialize(const Dataset& data, std::span<const std::size_t> rows);
// NaN cells replaced by per-column means computed over non-missing training
// cells; `train` supplies the means, both blocks get them applied.
std::vector<double> impute_train_means(DenseBlock& train_block);
void apply_impute(DenseBlock& block, const std::vector<double>& means);

TrainedModel train_block(const ModelSpec& spec, const DenseBlock& block);

} // namespace detail

} // namespace hitcast
