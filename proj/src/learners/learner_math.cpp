#include "hitcast/learner_math.hpp"

#include <cmath>
#include <initializer_list>

namespace hitcast {

double entropy_bits(std::int64_t hits, std::int64_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const std::int64_t c : {hits, total - hits}) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double gain_ratio_bits(std::int64_t hits, std::int64_t total, std::int64_t left_hits,
                       std::int64_t left_total) {
    const std::int64_t right_total = total - left_total;
    const std::int64_t right_hits = hits - left_hits;
    if (left_total == 0 || right_total == 0) return 0.0;
    const double n = static_cast<double>(total);
    const double pl = static_cast<double>(left_total) / n;
    const double pr = static_cast<double>(right_total) / n;
    const double gain = entropy_bits(hits, total) - pl * entropy_bits(left_hits, left_total) -
                        pr * entropy_bits(right_hits, right_total);
    const double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
    return gain / split_info;
}

double foil_gain(std::int64_t p, std::int64_t n, std::int64_t big_p, std::int64_t big_n) {
    const double prec_new = static_cast<double>(p) / static_cast<double>(p + n);
    const double prec_old = static_cast<double>(big_p) / static_cast<double>(big_p + big_n);
    return static_cast<double>(p) * (std::log2(prec_new) - std::log2(prec_old));
}

double laplace_score(std::int64_t hits, std::int64_t total) {
    return static_cast<double>(hits + 1) / static_cast<double>(total + 2);
}

} // namespace hitcast
