#include <numeric>

#include "hitcast/rng.hpp"
#include "internal.hpp"

namespace hitcast::detail {

// Deterministic subgradient descent on
//   (1/2)||w||^2 + C * sum_i hinge(y_i (w.x_i + b)).
// Scaled by 1/(C n) this is the usual (lambda/2)||w||^2 + mean hinge with
// lambda = 1/(C n); updates follow that scaled form with step 1/(lambda t).
// The example order is shuffled once from the seed and kept fixed across
// epochs, so training is a pure function of (data, config, seed).
LinearSvmParams train_linear_svm_impl(const DenseBlock& block, const LinearSvmConfig& cfg,
                                      std::uint64_t seed) {
    const double lambda = 1.0 / (cfg.c * static_cast<double>(block.n));

    std::vector<std::size_t> order(block.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<double> w(block.d, 0.0);
    double b = 0.0;
    std::uint64_t t = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double* row = block.row(i);
            const double y = block.y[i] ? 1.0 : -1.0;
            double f = b;
            for (std::size_t j = 0; j < block.d; ++j) f += w[j] * row[j];

            const double shrink = 1.0 - eta * lambda;  // = 1 - 1/t
            for (std::size_t j = 0; j < block.d; ++j) w[j] *= shrink;
            if (y * f < 1.0) {
                for (std::size_t j = 0; j < block.d; ++j) w[j] += eta * y * row[j];
                b += eta * y;  // bias unregularized
            }
        }
    }

    LinearSvmParams params;
    params.weights = std::move(w);
    params.bias = b;
    return params;
}

} // namespace hitcast::detail
