#include <charconv>
#include <cmath>

#include "hitcast/digest.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/learners.hpp"

namespace hitcast {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_gaussian(double x, double mean, double var) {
    static constexpr double kLog2Pi = 1.8378770664093454836;
    const double dlt = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + dlt * dlt / var);
}

} // namespace

TrainedModel::TrainedModel(ModelSpec spec, ModelParams params, std::vector<double> mean,
                           std::vector<double> sd, std::size_t n_features,
                           std::uint64_t training_fingerprint)
    : spec_(spec),
      params_(std::move(params)),
      mean_(std::move(mean)),
      sd_(std::move(sd)),
      n_features_(n_features),
      training_fingerprint_(training_fingerprint) {}

double TrainedModel::score(std::span<const double> x) const {
    if (x.size() != n_features_)
        throw DataError("score: expected " + std::to_string(n_features_) + " features, got " +
                        std::to_string(x.size()));

    // Standardizing learners see z = (x - mean) / sd.
    const auto z = [&](std::size_t j) { return (x[j] - mean_[j]) / sd_[j]; };

    if (const auto* p = std::get_if<LogisticParams>(&params_)) {
        double f = p->bias;
        for (std::size_t j = 0; j < n_features_; ++j) f += p->weights[j] * z(j);
        return sigmoid(f);
    }
    if (const auto* p = std::get_if<NaiveBayesParams>(&params_)) {
        double log_hit = p->log_prior_hit;
        double log_non = p->log_prior_non;
        for (std::size_t j = 0; j < n_features_; ++j) {
            const double v = z(j);
            log_hit += log_gaussian(v, p->mean_hit[j], p->var_hit[j]);
            log_non += log_gaussian(v, p->mean_non[j], p->var_non[j]);
        }
        // P(hit | x) computed stably from the log-odds.
        return sigmoid(log_hit - log_non);
    }
    if (const auto* p = std::get_if<LinearSvmParams>(&params_)) {
        double f = p->bias;
        for (std::size_t j = 0; j < n_features_; ++j) f += p->weights[j] * z(j);
        return f;
    }
    if (const auto* p = std::get_if<TreeParams>(&params_)) {
        std::int32_t node = 0;
        while (!p->nodes[static_cast<std::size_t>(node)].leaf) {
            const TreeNode& t = p->nodes[static_cast<std::size_t>(node)];
            node = x[static_cast<std::size_t>(t.feature)] <= t.threshold ? t.left : t.right;
        }
        return p->nodes[static_cast<std::size_t>(node)].score;
    }
    const auto& rl = std::get<RuleListParams>(params_);
    for (const Rule& rule : rl.rules) {
        bool match = true;
        for (const RuleCondition& c : rule.conditions) {
            const double v = x[static_cast<std::size_t>(c.feature)];
            if (c.is_ge ? v < c.threshold : v > c.threshold) {
                match = false;
                break;
            }
        }
        if (match) return rule.score;
    }
    return rl.default_score;
}

std::vector<double> TrainedModel::score_rows(const Dataset& data) const {
    std::vector<std::size_t> all(data.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return score_rows(data, all);
}

std::vector<double> TrainedModel::score_rows(const Dataset& data,
                                             std::span<const std::size_t> rows) const {
    std::vector<double> buf(data.n_features());
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        data.fill_dense_row(r, buf);
        out.push_back(score(buf));
    }
    return out;
}

namespace {

nlohmann::json params_to_json(const ModelParams& params) {
    if (const auto* p = std::get_if<LogisticParams>(&params))
        return {{"weights", p->weights}, {"bias", p->bias}};
    if (const auto* p = std::get_if<NaiveBayesParams>(&params))
        return {{"log_prior_hit", p->log_prior_hit}, {"log_prior_non", p->log_prior_non},
                {"mean_hit", p->mean_hit},           {"var_hit", p->var_hit},
                {"mean_non", p->mean_non},           {"var_non", p->var_non}};
    if (const auto* p = std::get_if<LinearSvmParams>(&params))
        return {{"weights", p->weights}, {"bias", p->bias}};
    if (const auto* p = std::get_if<TreeParams>(&params)) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& t : p->nodes)
            nodes.push_back({{"leaf", t.leaf},
                             {"feature", t.feature},
                             {"threshold", t.threshold},
                             {"left", t.left},
                             {"right", t.right},
                             {"n_hit", t.n_hit},
                             {"n_total", t.n_total},
                             {"score", t.score}});
        return {{"nodes", std::move(nodes)}};
    }
    const auto& rl = std::get<RuleListParams>(params);
    nlohmann::json rules = nlohmann::json::array();
    for (const Rule& rule : rl.rules) {
        nlohmann::json conds = nlohmann::json::array();
        for (const RuleCondition& c : rule.conditions)
            conds.push_back({{"feature", c.feature},
                             {"op", c.is_ge ? ">=" : "<="},
                             {"threshold", c.threshold}});
        rules.push_back({{"conditions", std::move(conds)},
                         {"covered_hit", rule.covered_hit},
                         {"covered_total", rule.covered_total},
                         {"score", rule.score}});
    }
    return {{"rules", std::move(rules)},
            {"default_hit", rl.default_hit},
            {"default_total", rl.default_total},
            {"default_score", rl.default_score}};
}

ModelParams params_from_json(Algorithm algo, const nlohmann::json& j) {
    switch (algo) {
        case Algorithm::logistic: {
            LogisticParams p;
            p.weights = j.at("weights").get<std::vector<double>>();
            p.bias = j.at("bias").get<double>();
            return p;
        }
        case Algorithm::naive_bayes: {
            NaiveBayesParams p;
            p.log_prior_hit = j.at("log_prior_hit").get<double>();
            p.log_prior_non = j.at("log_prior_non").get<double>();
            p.mean_hit = j.at("mean_hit").get<std::vector<double>>();
            p.var_hit = j.at("var_hit").get<std::vector<double>>();
            p.mean_non = j.at("mean_non").get<std::vector<double>>();
            p.var_non = j.at("var_non").get<std::vector<double>>();
            return p;
        }
        case Algorithm::linear_svm: {
            LinearSvmParams p;
            p.weights = j.at("weights").get<std::vector<double>>();
            p.bias = j.at("bias").get<double>();
            return p;
        }
        case Algorithm::decision_tree: {
            TreeParams p;
            for (const auto& n : j.at("nodes")) {
                TreeNode t;
                t.leaf = n.at("leaf").get<bool>();
                t.feature = n.at("feature").get<std::int32_t>();
                t.threshold = n.at("threshold").get<double>();
                t.left = n.at("left").get<std::int32_t>();
                t.right = n.at("right").get<std::int32_t>();
                t.n_hit = n.at("n_hit").get<std::int64_t>();
                t.n_total = n.at("n_total").get<std::int64_t>();
                t.score = n.at("score").get<double>();
                p.nodes.push_back(t);
            }
            return p;
        }
        case Algorithm::rule_list: {
            RuleListParams p;
            for (const auto& r : j.at("rules")) {
                Rule rule;
                for (const auto& c : r.at("conditions")) {
                    RuleCondition cond;
                    cond.feature = c.at("feature").get<std::int32_t>();
                    cond.is_ge = c.at("op").get<std::string>() == ">=";
                    cond.threshold = c.at("threshold").get<double>();
                    rule.conditions.push_back(cond);
                }
                rule.covered_hit = r.at("covered_hit").get<std::int64_t>();
                rule.covered_total = r.at("covered_total").get<std::int64_t>();
                rule.score = r.at("score").get<double>();
                p.rules.push_back(std::move(rule));
            }
            p.default_hit = j.at("default_hit").get<std::int64_t>();
            p.default_total = j.at("default_total").get<std::int64_t>();
            p.default_score = j.at("default_score").get<double>();
            return p;
        }
    }
    throw InternalError("bad algorithm tag");
}

} // namespace

std::uint64_t TrainedModel::params_fingerprint() const {
    Fnv64 h;
    h.update(params_to_json(params_).dump());
    for (double v : mean_) h.update_double(v);
    for (double v : sd_) h.update_double(v);
    return h.value();
}

nlohmann::json TrainedModel::to_json() const {
    return nlohmann::json{{"spec", spec_.to_json()},
                          {"n_features", n_features_},
                          {"standardization", {{"mean", mean_}, {"sd", sd_}}},
                          {"params", params_to_json(params_)},
                          {"training_fingerprint", to_hex(training_fingerprint_)}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
    try {
        const ModelSpec spec = ModelSpec::from_json(j.at("spec"));
        auto mean = j.at("standardization").at("mean").get<std::vector<double>>();
        auto sd = j.at("standardization").at("sd").get<std::vector<double>>();
        const auto n_features = j.at("n_features").get<std::size_t>();
        ModelParams params = params_from_json(spec.algorithm, j.at("params"));
        std::uint64_t fp = 0;
        if (j.contains("training_fingerprint")) {
            const auto hexstr = j["training_fingerprint"].get<std::string>();
            const auto res =
                std::from_chars(hexstr.data(), hexstr.data() + hexstr.size(), fp, 16);
            if (res.ec != std::errc{} || res.ptr != hexstr.data() + hexstr.size())
                throw DataError("model: bad training_fingerprint '" + hexstr + "'");
        }
        // Re-validate shape against n_features for standardizing learners.
        if (!mean.empty() && (mean.size() != n_features || sd.size() != n_features))
            throw DataError("model: standardization size mismatch");
        if (mean.empty()) {
            mean.assign(n_features, 0.0);
            sd.assign(n_features, 1.0);
        }
        return TrainedModel(spec, std::move(params), std::move(mean), std::move(sd), n_features,
                            fp);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model json: ") + e.what());
    }
}

} // namespace hitcast
