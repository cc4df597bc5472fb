#include <algorithm>
#include <cmath>

#include "hitcast/digest.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/learners.hpp"
#include "internal.hpp"

namespace hitcast {

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::logistic: return "logistic";
        case Algorithm::naive_bayes: return "naive_bayes";
        case Algorithm::linear_svm: return "linear_svm";
        case Algorithm::decision_tree: return "decision_tree";
        case Algorithm::rule_list: return "rule_list";
    }
    throw InternalError("unknown algorithm tag");
}

std::string_view algorithm_short_name(Algorithm a) {
    switch (a) {
        case Algorithm::logistic: return "lr";
        case Algorithm::naive_bayes: return "nb";
        case Algorithm::linear_svm: return "svm";
        case Algorithm::decision_tree: return "tree";
        case Algorithm::rule_list: return "rules";
    }
    throw InternalError("unknown algorithm tag");
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    for (Algorithm a : {Algorithm::logistic, Algorithm::naive_bayes, Algorithm::linear_svm,
                        Algorithm::decision_tree, Algorithm::rule_list})
        if (name == algorithm_name(a) || name == algorithm_short_name(a)) return a;
    return std::nullopt;
}

ModelSpec ModelSpec::make(Algorithm a, std::uint64_t seed) {
    ModelSpec spec;
    spec.algorithm = a;
    spec.seed = seed;
    return spec;
}

void ModelSpec::validate() const {
    if (logistic.l2 < 0) throw UsageError("logistic l2 must be >= 0");
    if (logistic.max_epochs < 1) throw UsageError("logistic max_epochs must be >= 1");
    if (logistic.tol < 0) throw UsageError("logistic tol must be >= 0");
    if (naive_bayes.var_floor <= 0) throw UsageError("naive bayes var_floor must be > 0");
    if (svm.c <= 0) throw UsageError("svm C must be > 0");
    if (svm.epochs < 1) throw UsageError("svm epochs must be >= 1");
    if (tree.max_depth < 1) throw UsageError("tree max_depth must be >= 1");
    if (tree.min_leaf < 1) throw UsageError("tree min_leaf must be >= 1");
    if (rules.grow_fraction <= 0 || rules.grow_fraction >= 1)
        throw UsageError("rule grow_fraction must lie in (0,1)");
}

nlohmann::json ModelSpec::to_json() const {
    nlohmann::json hp;
    switch (algorithm) {
        case Algorithm::logistic:
            hp = {{"l2", logistic.l2}, {"max_epochs", logistic.max_epochs}, {"tol", logistic.tol}};
            break;
        case Algorithm::naive_bayes:
            hp = {{"var_floor", naive_bayes.var_floor}};
            break;
        case Algorithm::linear_svm:
            hp = {{"c", svm.c}, {"epochs", svm.epochs}};
            break;
        case Algorithm::decision_tree:
            hp = {{"max_depth", tree.max_depth}, {"min_leaf", tree.min_leaf}};
            break;
        case Algorithm::rule_list:
            hp = {{"grow_fraction", rules.grow_fraction}};
            break;
    }
    return nlohmann::json{{"algorithm", std::string(algorithm_name(algorithm))},
                          {"seed", seed},
                          {"hyperparameters", std::move(hp)}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
    const auto name = j.at("algorithm").get<std::string>();
    const auto algo = algorithm_from_name(name);
    if (!algo) throw DataError("unknown algorithm '" + name + "'");
    ModelSpec spec = make(*algo, j.value("seed", std::uint64_t{42}));
    const nlohmann::json hp = j.value("hyperparameters", nlohmann::json::object());
    switch (*algo) {
        case Algorithm::logistic:
            spec.logistic.l2 = hp.value("l2", spec.logistic.l2);
            spec.logistic.max_epochs = hp.value("max_epochs", spec.logistic.max_epochs);
            spec.logistic.tol = hp.value("tol", spec.logistic.tol);
            break;
        case Algorithm::naive_bayes:
            spec.naive_bayes.var_floor = hp.value("var_floor", spec.naive_bayes.var_floor);
            break;
        case Algorithm::linear_svm:
            spec.svm.c = hp.value("c", spec.svm.c);
            spec.svm.epochs = hp.value("epochs", spec.svm.epochs);
            break;
        case Algorithm::decision_tree:
            spec.tree.max_depth = hp.value("max_depth", spec.tree.max_depth);
            spec.tree.min_leaf = hp.value("min_leaf", spec.tree.min_leaf);
            break;
        case Algorithm::rule_list:
            spec.rules.grow_fraction = hp.value("grow_fraction", spec.rules.grow_fraction);
            break;
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// Dense block plumbing
// ---------------------------------------------------------------------------

namespace detail {

std::uint64_t DenseBlock::fingerprint() const {
    Fnv64 h;
    h.update_u64(n);
    h.update_u64(d);
    for (int v : y) h.update_i64(v);
    for (double v : x) h.update_double(v);
    return h.value();
}

DenseBlock materialize(const Dataset& data, std::span<const std::size_t> rows) {
    DenseBlock block;
    block.n = rows.size();
    block.d = data.n_features();
    block.x.resize(block.n * block.d);
    block.y.reserve(block.n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= data.n_rows()) throw InternalError("row subset index out of range");
        data.fill_dense_row(rows[i], std::span<double>(block.row(i), block.d));
        block.y.push_back(data.labels()[rows[i]]);
    }
    return block;
}

std::vector<double> impute_train_means(DenseBlock& block) {
    std::vector<double> sum(block.d, 0.0);
    std::vector<std::size_t> count(block.d, 0);
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        for (std::size_t j = 0; j < block.d; ++j) {
            if (!std::isnan(row[j])) {
                sum[j] += row[j];
                ++count[j];
            }
        }
    }
    std::vector<double> means(block.d, 0.0);
    for (std::size_t j = 0; j < block.d; ++j)
        if (count[j] > 0) means[j] = sum[j] / static_cast<double>(count[j]);
    apply_impute(block, means);
    return means;
}

void apply_impute(DenseBlock& block, const std::vector<double>& means) {
    if (means.size() != block.d) throw InternalError("impute: dimension mismatch");
    for (std::size_t i = 0; i < block.n; ++i) {
        double* row = block.row(i);
        for (std::size_t j = 0; j < block.d; ++j)
            if (std::isnan(row[j])) row[j] = means[j];
    }
}

namespace {

void check_both_classes(const DenseBlock& block) {
    std::size_t pos = 0;
    for (int v : block.y) pos += static_cast<std::size_t>(v);
    if (pos == 0) throw DataError("training subset has no hit rows");
    if (pos == block.n) throw DataError("training subset has no nonhit rows");
}

// Training-data mean/sd per column; zero-variance columns get sd 1.
void compute_standardization(const DenseBlock& block, std::vector<double>& mean,
                             std::vector<double>& sd) {
    mean.assign(block.d, 0.0);
    sd.assign(block.d, 0.0);
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        for (std::size_t j = 0; j < block.d; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < block.d; ++j) mean[j] /= static_cast<double>(block.n);
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        for (std::size_t j = 0; j < block.d; ++j) {
            const double dlt = row[j] - mean[j];
            sd[j] += dlt * dlt;
        }
    }
    for (std::size_t j = 0; j < block.d; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(block.n));
        if (sd[j] == 0.0) sd[j] = 1.0;
    }
}

DenseBlock standardized_copy(const DenseBlock& block, const std::vector<double>& mean,
                             const std::vector<double>& sd) {
    DenseBlock out = block;
    for (std::size_t i = 0; i < out.n; ++i) {
        double* row = out.row(i);
        for (std::size_t j = 0; j < out.d; ++j) {
            row[j] = (row[j] - mean[j]) / sd[j];
            if (!std::isfinite(row[j]))
                throw InternalError("non-finite feature after standardization");
        }
    }
    return out;
}

} // namespace

TrainedModel train_block(const ModelSpec& spec, const DenseBlock& block) {
    spec.validate();
    if (block.n == 0) throw DataError("training subset is empty");
    check_both_classes(block);
    for (double v : block.x)
        if (std::isnan(v))
            throw InternalError("missing values reached the trainer; impute them first");

    const std::uint64_t fp = block.fingerprint();
    const bool standardizes = spec.algorithm == Algorithm::logistic ||
                              spec.algorithm == Algorithm::naive_bayes ||
                              spec.algorithm == Algorithm::linear_svm;

    std::vector<double> mean, sd;
    ModelParams params;
    if (standardizes) {
        compute_standardization(block, mean, sd);
        const DenseBlock z = standardized_copy(block, mean, sd);
        switch (spec.algorithm) {
            case Algorithm::logistic: params = train_logistic_impl(z, spec.logistic); break;
            case Algorithm::naive_bayes:
                params = train_naive_bayes_impl(z, spec.naive_bayes);
                break;
            case Algorithm::linear_svm:
                params = train_linear_svm_impl(z, spec.svm, spec.seed);
                break;
            default: throw InternalError("bad dispatch");
        }
    } else if (spec.algorithm == Algorithm::decision_tree) {
        params = train_tree_impl(block, spec.tree);
    } else {
        params = train_rule_list_impl(block, spec.rules, spec.seed);
    }
    return TrainedModel(spec, std::move(params), std::move(mean), std::move(sd), block.d, fp);
}

} // namespace detail

TrainedModel train(const ModelSpec& spec, const Dataset& data,
                   std::span<const std::size_t> row_subset) {
    if (row_subset.empty()) throw DataError("training subset is empty");
    detail::DenseBlock block = detail::materialize(data, row_subset);
    return detail::train_block(spec, block);
}

TrainedModel train(const ModelSpec& spec, const Dataset& data) {
    std::vector<std::size_t> all(data.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return train(spec, data, all);
}

} // namespace hitcast
