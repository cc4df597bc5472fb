#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hitcast/learner_math.hpp"
#include "hitcast/rng.hpp"
#include "internal.hpp"

namespace hitcast::detail {

namespace {

bool holds(const RuleCondition& c, const double* row) {
    const double v = row[static_cast<std::size_t>(c.feature)];
    return c.is_ge ? v >= c.threshold : v <= c.threshold;
}

bool matches(const std::vector<RuleCondition>& conds, const double* row) {
    for (const auto& c : conds)
        if (!holds(c, row)) return false;
    return true;
}

struct Coverage {
    std::int64_t pos = 0;
    std::int64_t neg = 0;
    std::int64_t total() const { return pos + neg; }
};

Coverage coverage_of(const DenseBlock& block, const std::vector<std::size_t>& rows,
                     const std::vector<RuleCondition>& conds, std::size_t n_conds) {
    Coverage cov;
    for (std::size_t i : rows) {
        bool ok = true;
        for (std::size_t k = 0; k < n_conds; ++k)
            if (!holds(conds[k], block.row(i))) {
                ok = false;
                break;
            }
        if (!ok) continue;
        (block.y[i] ? cov.pos : cov.neg) += 1;
    }
    return cov;
}

struct Candidate {
    bool found = false;
    double gain = 0.0;
    RuleCondition cond;
};

// Best single numeric condition (feature >= v or feature <= v, v an observed
// value) by FOIL gain over the covered grow rows.
Candidate best_condition(const DenseBlock& block, const std::vector<std::size_t>& covered,
                         std::int64_t pos0, std::int64_t neg0) {
    Candidate best;
    std::vector<std::pair<double, int>> scratch;
    struct Group {
        double value;
        std::int64_t pos;
        std::int64_t neg;
    };
    std::vector<Group> groups;

    for (std::size_t j = 0; j < block.d; ++j) {
        scratch.clear();
        for (std::size_t i : covered) scratch.emplace_back(block.row(i)[j], block.y[i]);
        std::sort(scratch.begin(), scratch.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        groups.clear();
        for (const auto& [v, y] : scratch) {
            if (groups.empty() || groups.back().value != v) groups.push_back(Group{v, 0, 0});
            (y ? groups.back().pos : groups.back().neg) += 1;
        }
        if (groups.size() < 2) continue;  // constant feature cannot refine

        const auto consider = [&](double gain, bool is_ge, double threshold) {
            if (gain > best.gain) {
                best.found = true;
                best.gain = gain;
                best.cond = RuleCondition{static_cast<std::int32_t>(j), is_ge, threshold};
            }
        };

        // feature >= v: suffix coverage, values ascending.
        std::int64_t suf_pos = pos0, suf_neg = neg0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (g > 0) {
                suf_pos -= groups[g - 1].pos;
                suf_neg -= groups[g - 1].neg;
            }
            if (suf_pos > 0 && (suf_pos + suf_neg) < (pos0 + neg0))
                consider(foil_gain(suf_pos, suf_neg, pos0, neg0), true, groups[g].value);
        }
        // feature <= v: prefix coverage.
        std::int64_t pre_pos = 0, pre_neg = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            pre_pos += groups[g].pos;
            pre_neg += groups[g].neg;
            if (pre_pos > 0 && (pre_pos + pre_neg) < (pos0 + neg0))
                consider(foil_gain(pre_pos, pre_neg, pos0, neg0), false, groups[g].value);
        }
    }
    return best;
}

std::vector<RuleCondition> grow_rule(const DenseBlock& block, std::vector<std::size_t> covered) {
    std::vector<RuleCondition> conds;
    while (true) {
        std::int64_t pos0 = 0, neg0 = 0;
        for (std::size_t i : covered) (block.y[i] ? pos0 : neg0) += 1;
        if (pos0 == 0 || neg0 == 0) break;  // nothing to grow from, or pure

        const Candidate cand = best_condition(block, covered, pos0, neg0);
        if (!cand.found || cand.gain <= 0.0) break;
        conds.push_back(cand.cond);
        std::erase_if(covered, [&](std::size_t i) { return !holds(cand.cond, block.row(i)); });
    }
    return conds;
}

// Delete trailing conditions while the prune-set value (p-n)/(p+n) does not
// decrease. Rules never shrink below one condition.
void prune_rule(const DenseBlock& block, const std::vector<std::size_t>& prune_rows,
                std::vector<RuleCondition>& conds) {
    if (prune_rows.empty() || conds.size() <= 1) return;
    const auto value = [&](std::size_t n_conds) {
        const Coverage cov = coverage_of(block, prune_rows, conds, n_conds);
        if (cov.total() == 0) return -1.0;
        return static_cast<double>(cov.pos - cov.neg) / static_cast<double>(cov.total());
    };
    double current = value(conds.size());
    while (conds.size() > 1) {
        const double candidate = value(conds.size() - 1);
        if (candidate >= current) {
            conds.pop_back();
            current = candidate;
        } else {
            break;
        }
    }
}

} // namespace

// IREP-style sequential covering for the hit class: per rule, the remaining
// data is split (seeded) into grow and prune sets; a conjunctive rule is
// grown greedily by FOIL gain, pruned on the prune set, and accepted while
// its prune-set precision stays above 0.5 and positives remain.
RuleListParams train_rule_list_impl(const DenseBlock& block, const RuleListConfig& cfg,
                                    std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> remaining(block.n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});

    RuleListParams params;
    while (true) {
        std::int64_t pos_remaining = 0;
        for (std::size_t i : remaining) pos_remaining += block.y[i];
        if (pos_remaining == 0) break;

        std::vector<std::size_t> shuffled = remaining;
        rng.shuffle(shuffled);
        std::size_t n_grow = static_cast<std::size_t>(
            std::llround(cfg.grow_fraction * static_cast<double>(shuffled.size())));
        n_grow = std::clamp<std::size_t>(n_grow, 1, shuffled.size());
        const std::vector<std::size_t> grow_rows(shuffled.begin(),
                                                 shuffled.begin() + static_cast<std::ptrdiff_t>(n_grow));
        const std::vector<std::size_t> prune_rows(shuffled.begin() + static_cast<std::ptrdiff_t>(n_grow),
                                                  shuffled.end());

        std::vector<RuleCondition> conds = grow_rule(block, grow_rows);
        if (conds.empty()) break;  // e.g. all-negative grow set
        prune_rule(block, prune_rows, conds);

        // Stopping test on the prune set (grow set when there is none).
        const auto& check_rows = prune_rows.empty() ? grow_rows : prune_rows;
        const Coverage check = coverage_of(block, check_rows, conds, conds.size());
        const double precision =
            check.total() > 0
                ? static_cast<double>(check.pos) / static_cast<double>(check.total())
                : 0.0;
        if (precision <= 0.5) break;

        const Coverage cov = coverage_of(block, remaining, conds, conds.size());
        if (cov.pos == 0) break;

        Rule rule;
        rule.conditions = std::move(conds);
        rule.covered_hit = cov.pos;
        rule.covered_total = cov.total();
        rule.score = laplace_score(cov.pos, cov.total());
        params.rules.push_back(std::move(rule));

        std::erase_if(remaining, [&](std::size_t i) {
            return matches(params.rules.back().conditions, block.row(i));
        });
    }

    std::int64_t def_pos = 0;
    for (std::size_t i : remaining) def_pos += block.y[i];
    params.default_hit = def_pos;
    params.default_total = static_cast<std::int64_t>(remaining.size());
    params.default_score = laplace_score(def_pos, params.default_total);
    return params;
}

} // namespace hitcast::detail
