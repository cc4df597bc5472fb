#include <algorithm>
#include <cmath>
#include <vector>

#include "hitcast/errors.hpp"
#include "hitcast/learner_math.hpp"
#include "internal.hpp"

namespace hitcast::detail {

namespace {

// (value, class counts) aggregated per distinct feature value, ascending.
struct ValueGroup {
    double value;
    std::int64_t hits;
    std::int64_t total;
};

void collect_groups(const DenseBlock& block, const std::vector<std::size_t>& rows, std::size_t j,
                    std::vector<ValueGroup>& groups, std::vector<std::pair<double, int>>& scratch) {
    scratch.clear();
    for (std::size_t i : rows) scratch.emplace_back(block.row(i)[j], block.y[i]);
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    groups.clear();
    for (const auto& [v, y] : scratch) {
        if (groups.empty() || groups.back().value != v) groups.push_back(ValueGroup{v, 0, 0});
        groups.back().hits += y;
        groups.back().total += 1;
    }
}

struct Split {
    bool found = false;
    double gain_ratio = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const DenseBlock& block, const DecisionTreeConfig& cfg)
        : block_(block), cfg_(cfg) {}

    std::vector<TreeNode> build() {
        std::vector<std::size_t> rows(block_.n);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        grow(rows, 0);
        return std::move(nodes_);
    }

private:
    std::int32_t grow(std::vector<std::size_t>& rows, int depth) {
        const auto index = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        std::int64_t hits = 0;
        for (std::size_t i : rows) hits += block_.y[i];
        const auto total = static_cast<std::int64_t>(rows.size());
        {
            TreeNode& node = nodes_.back();
            node.n_hit = hits;
            node.n_total = total;
            node.score = laplace_score(hits, total);
        }

        const bool pure = hits == 0 || hits == total;
        if (pure || depth >= cfg_.max_depth ||
            total < static_cast<std::int64_t>(2 * cfg_.min_leaf))
            return index;

        const Split split = best_split(rows, hits);
        if (!split.found) return index;

        std::vector<std::size_t> left, right;
        left.reserve(rows.size());
        right.reserve(rows.size());
        for (std::size_t i : rows) {
            if (block_.row(i)[static_cast<std::size_t>(split.feature)] <= split.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();

        // Fill split fields before recursing; look the node up again after,
        // since recursion reallocates nodes_.
        nodes_[static_cast<std::size_t>(index)].leaf = false;
        nodes_[static_cast<std::size_t>(index)].feature = split.feature;
        nodes_[static_cast<std::size_t>(index)].threshold = split.threshold;
        const std::int32_t left_index = grow(left, depth + 1);
        nodes_[static_cast<std::size_t>(index)].left = left_index;
        const std::int32_t right_index = grow(right, depth + 1);
        nodes_[static_cast<std::size_t>(index)].right = right_index;
        return index;
    }

    // Candidate thresholds are midpoints between consecutive distinct sorted
    // values; criterion is C4.5's gain ratio in bits. Ties keep the lower
    // (feature index, threshold).
    Split best_split(const std::vector<std::size_t>& rows, std::int64_t hits) {
        const auto total = static_cast<std::int64_t>(rows.size());

        Split best;
        std::vector<ValueGroup> groups;
        std::vector<std::pair<double, int>> scratch;
        for (std::size_t j = 0; j < block_.d; ++j) {
            collect_groups(block_, rows, j, groups, scratch);
            if (groups.size() < 2) continue;

            std::int64_t left_hits = 0, left_total = 0;
            for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
                left_hits += groups[g].hits;
                left_total += groups[g].total;
                if (left_total < cfg_.min_leaf || total - left_total < cfg_.min_leaf) continue;

                const double gain_ratio = gain_ratio_bits(hits, total, left_hits, left_total);
                if (gain_ratio > best.gain_ratio) {
                    best.found = true;
                    best.gain_ratio = gain_ratio;
                    best.feature = static_cast<std::int32_t>(j);
                    best.threshold = (groups[g].value + groups[g + 1].value) / 2.0;
                }
            }
        }
        return best;
    }

    const DenseBlock& block_;
    const DecisionTreeConfig& cfg_;
    std::vector<TreeNode> nodes_;
};

} // namespace

TreeParams train_tree_impl(const DenseBlock& block, const DecisionTreeConfig& cfg) {
    TreeBuilder builder(block, cfg);
    TreeParams params;
    params.nodes = builder.build();
    if (params.nodes.empty()) throw InternalError("tree builder produced no nodes");
    return params;
}

} // namespace hitcast::detail
