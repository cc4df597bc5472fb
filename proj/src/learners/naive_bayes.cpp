#include <cmath>

#include "internal.hpp"

namespace hitcast::detail {

// Gaussian event model per feature per class; priors from class frequencies;
// variances floored. Posteriors are evaluated in log space at score time.
NaiveBayesParams train_naive_bayes_impl(const DenseBlock& block, const NaiveBayesConfig& cfg) {
    const std::size_t d = block.d;
    NaiveBayesParams p;
    p.mean_hit.assign(d, 0.0);
    p.var_hit.assign(d, 0.0);
    p.mean_non.assign(d, 0.0);
    p.var_non.assign(d, 0.0);

    std::size_t n_hit = 0;
    for (int y : block.y) n_hit += static_cast<std::size_t>(y);
    const std::size_t n_non = block.n - n_hit;

    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        auto& mean = block.y[i] ? p.mean_hit : p.mean_non;
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) {
        p.mean_hit[j] /= static_cast<double>(n_hit);
        p.mean_non[j] /= static_cast<double>(n_non);
    }
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        auto& mean = block.y[i] ? p.mean_hit : p.mean_non;
        auto& var = block.y[i] ? p.var_hit : p.var_non;
        for (std::size_t j = 0; j < d; ++j) {
            const double dlt = row[j] - mean[j];
            var[j] += dlt * dlt;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        p.var_hit[j] = std::max(p.var_hit[j] / static_cast<double>(n_hit), cfg.var_floor);
        p.var_non[j] = std::max(p.var_non[j] / static_cast<double>(n_non), cfg.var_floor);
    }

    p.log_prior_hit = std::log(static_cast<double>(n_hit) / static_cast<double>(block.n));
    p.log_prior_non = std::log(static_cast<double>(n_non) / static_cast<double>(block.n));
    return p;
}

} // namespace hitcast::detail
