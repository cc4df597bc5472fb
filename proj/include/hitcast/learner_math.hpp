#pragma once

#include <cstdint>

namespace hitcast {

// Shannon entropy of a binary node, in bits.
double entropy_bits(std::int64_t hits, std::int64_t total);

// C4.5 split criterion: information gain divided by split information, both
// in bits, for the binary split (left, right = rest). Zero when the split is
// degenerate (an empty side).
double gain_ratio_bits(std::int64_t hits, std::int64_t total, std::int64_t left_hits,
                       std::int64_t left_total);

// FOIL gain of refining a rule with coverage (P, N) into one covering (p, n):
// p * (log2(p/(p+n)) - log2(P/(P+N))). Requires p > 0 and P > 0.
double foil_gain(std::int64_t p, std::int64_t n, std::int64_t big_p, std::int64_t big_n);

// Laplace-corrected hit fraction (hits+1)/(total+2).
double laplace_score(std::int64_t hits, std::int64_t total);

} // namespace hitcast
