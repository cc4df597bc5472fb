#include <cmath>

#include "hitcast/errors.hpp"
#include "internal.hpp"

namespace hitcast::detail {

namespace {

// log(1 + exp(-z)) without overflow
double softplus_neg(double z) {
    if (z > 0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

// (1/n) sum log(1 + exp(-y_i (w.x_i + b))) + (l2/2) ||w||^2, y in {-1,+1};
// bias unregularized.
double logistic_loss(const DenseBlock& block, const std::vector<double>& w, double b, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        double f = b;
        for (std::size_t j = 0; j < block.d; ++j) f += w[j] * row[j];
        const double y = block.y[i] ? 1.0 : -1.0;
        loss += softplus_neg(y * f);
    }
    loss /= static_cast<double>(block.n);
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const DenseBlock& block, const std::vector<double>& w, double b, double l2,
                       std::vector<double>& grad_w, double& grad_b) {
    grad_w.assign(block.d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < block.n; ++i) {
        const double* row = block.row(i);
        double f = b;
        for (std::size_t j = 0; j < block.d; ++j) f += w[j] * row[j];
        const double y = block.y[i] ? 1.0 : -1.0;
        const double coeff = -y * sigmoid(-y * f);
        for (std::size_t j = 0; j < block.d; ++j) grad_w[j] += coeff * row[j];
        grad_b += coeff;
    }
    const double inv_n = 1.0 / static_cast<double>(block.n);
    for (std::size_t j = 0; j < block.d; ++j) grad_w[j] = grad_w[j] * inv_n + l2 * w[j];
    grad_b *= inv_n;
}

// Full-batch gradient descent with backtracking line search: start each epoch
// at step 1.0 and halve while the loss increases. Weights start at zero.
LogisticParams train_logistic_impl(const DenseBlock& block, const LogisticConfig& cfg) {
    std::vector<double> w(block.d, 0.0);
    double b = 0.0;
    double loss = logistic_loss(block, w, b, cfg.l2);

    std::vector<double> grad_w;
    double grad_b = 0.0;
    std::vector<double> w_next(block.d);

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        logistic_gradient(block, w, b, cfg.l2, grad_w, grad_b);

        double step = 1.0;
        double next_loss = loss;
        double b_next = b;
        bool moved = false;
        while (step > 1e-20) {
            for (std::size_t j = 0; j < block.d; ++j) w_next[j] = w[j] - step * grad_w[j];
            b_next = b - step * grad_b;
            next_loss = logistic_loss(block, w_next, b_next, cfg.l2);
            if (next_loss <= loss) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // gradient no longer yields a descent direction

        const double decrease = loss - next_loss;
        w.swap(w_next);
        b = b_next;
        loss = next_loss;
        if (decrease < cfg.tol) break;
    }

    LogisticParams params;
    params.weights = std::move(w);
    params.bias = b;
    return params;
}

} // namespace hitcast::detail
