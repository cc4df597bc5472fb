#pragma once

#include <cstdint>

#include "hitcast/learners.hpp"

namespace hitcast::detail {

// Per-algorithm trainers. Logistic / NB / SVM receive the standardized block;
// tree and rule list receive raw values (threshold learners are
// scale-invariant).
LogisticParams train_logistic_impl(const DenseBlock& block, const LogisticConfig& cfg);
NaiveBayesParams train_naive_bayes_impl(const DenseBlock& block, const NaiveBayesConfig& cfg);
LinearSvmParams train_linear_svm_impl(const DenseBlock& block, const LinearSvmConfig& cfg,
                                      std::uint64_t seed);
TreeParams train_tree_impl(const DenseBlock& block, const DecisionTreeConfig& cfg);
RuleListParams train_rule_list_impl(const DenseBlock& block, const RuleListConfig& cfg,
                                    std::uint64_t seed);

// Regularized mean negative log-likelihood and its gradient; shared with the
// acceptance suite's finite-difference check.
double logistic_loss(const DenseBlock& block, const std::vector<double>& w, double b, double l2);
void logistic_gradient(const DenseBlock& block, const std::vector<double>& w, double b, double l2,
                       std::vector<double>& grad_w, double& grad_b);

} // namespace hitcast::detail
