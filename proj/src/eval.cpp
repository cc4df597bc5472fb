#include "hitcast/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "hitcast/csv.hpp"
#include "hitcast/digest.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/rng.hpp"
#include "hitcast/version.hpp"

namespace fs = std::filesystem;

namespace hitcast {

std::vector<std::size_t> FoldAssignment::rows_in_fold(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldAssignment::rows_not_in_fold(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldAssignment stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("stratified folds require k >= 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError("stratified folds: label outside {0,1}");
        (labels[i] ? pos : neg).push_back(i);
    }
    if (pos.size() < static_cast<std::size_t>(k))
        throw DataError("hit class has " + std::to_string(pos.size()) + " rows, fewer than k=" +
                        std::to_string(k));
    if (neg.size() < static_cast<std::size_t>(k))
        throw DataError("nonhit class has " + std::to_string(neg.size()) +
                        " rows, fewer than k=" + std::to_string(k));

    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(labels.size(), 0);
    Rng rng(seed);
    for (auto* cls : {&pos, &neg}) {
        rng.shuffle(*cls);
        for (std::size_t i = 0; i < cls->size(); ++i)
            fa.fold_of[(*cls)[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fa;
}

void RocCurve::validate() const {
    if (points.size() < 2) throw InternalError("roc: fewer than two points");
    if (points.front() != std::pair{0.0, 0.0} || points.back() != std::pair{1.0, 1.0})
        throw InternalError("roc: endpoints must be (0,0) and (1,1)");
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].first < points[i - 1].first || points[i].second < points[i - 1].second)
            throw InternalError("roc: points must be non-decreasing");
        area += (points[i].first - points[i - 1].first) *
                (points[i].second + points[i - 1].second) / 2.0;
    }
    if (std::abs(area - auc) > 1e-12) throw InternalError("roc: auc does not match its points");
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw DataError("roc: scores and labels differ in length");
    if (scores.empty()) throw DataError("roc: empty input");
    std::int64_t total_pos = 0, total_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw DataError("roc: non-finite score");
        if (labels[i] != 0 && labels[i] != 1) throw DataError("roc: label outside {0,1}");
        (labels[i] ? total_pos : total_neg) += 1;
    }
    if (total_pos == 0) throw DataError("roc: no positive labels");
    if (total_neg == 0) throw DataError("roc: no negative labels");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve roc;
    roc.points.emplace_back(0.0, 0.0);

    // Sweep tie groups; integer arithmetic for the area keeps the trapezoid
    // value exactly the rank statistic.
    std::int64_t tp = 0, fp = 0;
    std::int64_t area_num = 0;  // 2 * P * N * area
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::int64_t group_pos = 0, group_neg = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] ? group_pos : group_neg) += 1;
            ++j;
        }
        area_num += group_neg * (2 * tp + group_pos);
        tp += group_pos;
        fp += group_neg;
        roc.points.emplace_back(static_cast<double>(fp) / static_cast<double>(total_neg),
                                static_cast<double>(tp) / static_cast<double>(total_pos));
        i = j;
    }
    roc.auc = static_cast<double>(area_num) / (2.0 * static_cast<double>(total_pos) *
                                               static_cast<double>(total_neg));
    roc.validate();
    return roc;
}

CvReport cross_validate(const ModelSpec& spec, const Dataset& data, int k, std::uint64_t seed) {
    spec.validate();
    const FoldAssignment folds = stratified_folds(data.labels(), k, seed);

    CvReport report;
    report.dataset_name = data.name();
    report.spec = spec;
    report.k = k;
    report.fold_seed = seed;
    report.dataset_digest = to_hex(data.digest());
    report.n_rows = data.n_rows();
    report.n_features = data.n_features();
    report.positives = data.positives();
    report.negatives = data.negatives();

    std::vector<double> pooled_scores;
    std::vector<int> pooled_labels;
    pooled_scores.reserve(data.n_rows());
    pooled_labels.reserve(data.n_rows());

    for (int fold = 0; fold < k; ++fold) {
        const auto train_rows = folds.rows_not_in_fold(fold);
        const auto test_rows = folds.rows_in_fold(fold);
        try {
            detail::DenseBlock train_block = detail::materialize(data, train_rows);
            detail::DenseBlock test_block = detail::materialize(data, test_rows);
            // Missing cells are filled from training-fold column means only.
            const std::vector<double> means = detail::impute_train_means(train_block);
            detail::apply_impute(test_block, means);

            const TrainedModel model = detail::train_block(spec, train_block);
            report.fold_model_fingerprints.push_back(to_hex(model.params_fingerprint()));

            std::vector<double> scores(test_block.n);
            for (std::size_t i = 0; i < test_block.n; ++i)
                scores[i] = model.score(std::span<const double>(test_block.row(i), test_block.d));

            const RocCurve fold_roc = roc_curve(scores, test_block.y);
            report.per_fold_auc.push_back(fold_roc.auc);
            pooled_scores.insert(pooled_scores.end(), scores.begin(), scores.end());
            pooled_labels.insert(pooled_labels.end(), test_block.y.begin(), test_block.y.end());
        } catch (const DataError& e) {
            throw DataError("fold " + std::to_string(fold) + ": " + e.what());
        }
    }

    report.mean_auc =
        std::accumulate(report.per_fold_auc.begin(), report.per_fold_auc.end(), 0.0) /
        static_cast<double>(report.per_fold_auc.size());
    report.pooled_roc = roc_curve(pooled_scores, pooled_labels);
    report.pooled_auc = report.pooled_roc.auc;
    return report;
}

nlohmann::json CvReport::to_json() const {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [x, y] : pooled_roc.points) points.push_back({x, y});
    return nlohmann::json{{"dataset", dataset_name},
                          {"spec", spec.to_json()},
                          {"k", k},
                          {"fold_seed", fold_seed},
                          {"per_fold_auc", per_fold_auc},
                          {"mean_auc", mean_auc},
                          {"pooled_auc", pooled_auc},
                          {"pooled_roc", std::move(points)},
                          {"fold_model_fingerprints", fold_model_fingerprints},
                          {"dataset_digest", dataset_digest},
                          {"n_rows", n_rows},
                          {"n_features", n_features},
                          {"positives", positives},
                          {"negatives", negatives}};
}

CvReport CvReport::from_json(const nlohmann::json& j) {
    try {
        CvReport r;
        r.dataset_name = j.at("dataset").get<std::string>();
        r.spec = ModelSpec::from_json(j.at("spec"));
        r.k = j.at("k").get<int>();
        r.fold_seed = j.at("fold_seed").get<std::uint64_t>();
        r.per_fold_auc = j.at("per_fold_auc").get<std::vector<double>>();
        r.mean_auc = j.at("mean_auc").get<double>();
        r.pooled_auc = j.at("pooled_auc").get<double>();
        for (const auto& p : j.at("pooled_roc"))
            r.pooled_roc.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        r.pooled_roc.auc = r.pooled_auc;
        r.fold_model_fingerprints =
            j.at("fold_model_fingerprints").get<std::vector<std::string>>();
        r.dataset_digest = j.at("dataset_digest").get<std::string>();
        r.n_rows = j.at("n_rows").get<std::size_t>();
        r.n_features = j.at("n_features").get<std::size_t>();
        r.positives = j.at("positives").get<std::size_t>();
        r.negatives = j.at("negatives").get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("cv report json: ") + e.what());
    }
}

namespace {

// Minimal standalone SVG line plot of a pooled ROC with the chance diagonal.
std::string roc_svg(const RocCurve& roc, const std::string& title) {
    constexpr int kSize = 480;
    constexpr int kMargin = 56;
    constexpr int kPlot = kSize - 2 * kMargin;
    const auto px = [&](double v) {
        return format_double_fixed(kMargin + v * kPlot, 1);
    };
    const auto py = [&](double v) {
        return format_double_fixed(kMargin + (1.0 - v) * kPlot, 1);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kSize) +
           "\" height=\"" + std::to_string(kSize) + "\" viewBox=\"0 0 " + std::to_string(kSize) +
           " " + std::to_string(kSize) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "  <text x=\"" + std::to_string(kSize / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           title + "</text>\n";

    // axes with 0/0.5/1 ticks
    svg += "  <g stroke=\"black\" fill=\"none\">\n";
    svg += "    <rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
           "\" width=\"" + std::to_string(kPlot) + "\" height=\"" + std::to_string(kPlot) +
           "\"/>\n";
    svg += "  </g>\n";
    svg += "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (double tick : {0.0, 0.5, 1.0}) {
        svg += "    <text x=\"" + px(tick) + "\" y=\"" +
               std::to_string(kSize - kMargin + 18) + "\" text-anchor=\"middle\">" +
               format_double_fixed(tick, 1) + "</text>\n";
        svg += "    <text x=\"" + std::to_string(kMargin - 8) + "\" y=\"" + py(tick) +
               "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
               format_double_fixed(tick, 1) + "</text>\n";
    }
    svg += "    <text x=\"" + std::to_string(kSize / 2) + "\" y=\"" +
           std::to_string(kSize - 12) +
           "\" text-anchor=\"middle\">False positive rate</text>\n";
    svg += "    <text x=\"16\" y=\"" + std::to_string(kSize / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + std::to_string(kSize / 2) +
           ")\">True positive rate</text>\n";
    svg += "  </g>\n";

    svg += "  <line x1=\"" + px(0.0) + "\" y1=\"" + py(0.0) + "\" x2=\"" + px(1.0) + "\" y2=\"" +
           py(1.0) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

    svg += "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < roc.points.size(); ++i) {
        if (i) svg += ' ';
        svg += px(roc.points[i].first) + "," + py(roc.points[i].second);
    }
    svg += "\"/>\n";
    svg += "  <text x=\"" + std::to_string(kSize - kMargin) + "\" y=\"" +
           std::to_string(kSize - kMargin - 8) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">AUC = " +
           format_double_fixed(roc.auc, 3) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace

void emit_report(const std::vector<CvReport>& reports, const std::string& out_dir) {
    if (reports.empty()) throw DataError("emit_report: no reports");
    fs::create_directories(out_dir);

    // Table layout: one row per dataset, one column per algorithm present,
    // in the fixed order tree, rules, nb, lr, svm; cells are mean AUC.
    const std::vector<Algorithm> column_order{Algorithm::decision_tree, Algorithm::rule_list,
                                              Algorithm::naive_bayes, Algorithm::logistic,
                                              Algorithm::linear_svm};
    std::vector<Algorithm> columns;
    for (Algorithm a : column_order)
        for (const auto& r : reports)
            if (r.spec.algorithm == a) {
                columns.push_back(a);
                break;
            }
    std::vector<std::string> datasets;
    for (const auto& r : reports)
        if (std::find(datasets.begin(), datasets.end(), r.dataset_name) == datasets.end())
            datasets.push_back(r.dataset_name);

    std::map<std::pair<std::string, Algorithm>, double> cells;
    for (const auto& r : reports) cells[{r.dataset_name, r.spec.algorithm}] = r.mean_auc;

    {
        std::ofstream out(fs::path(out_dir) / "auc_table.csv", std::ios::binary);
        if (!out) throw DataError("cannot write " + out_dir + "/auc_table.csv");
        out << "dataset";
        for (Algorithm a : columns) out << ',' << algorithm_short_name(a);
        out << '\n';
        for (const auto& name : datasets) {
            out << csv_quote(name);
            for (Algorithm a : columns) {
                out << ',';
                if (const auto it = cells.find({name, a}); it != cells.end())
                    out << format_double_fixed(it->second, 4);
            }
            out << '\n';
        }
    }

    nlohmann::json run_reports = nlohmann::json::array();
    for (const auto& r : reports) {
        const std::string name =
            r.dataset_name + "_" + std::string(algorithm_short_name(r.spec.algorithm));
        {
            std::ofstream out(fs::path(out_dir) / ("roc_" + name + ".csv"), std::ios::binary);
            if (!out) throw DataError("cannot write roc_" + name + ".csv");
            out << "fpr,tpr\n";
            for (const auto& [x, y] : r.pooled_roc.points)
                out << format_double(x) << ',' << format_double(y) << '\n';
        }
        {
            std::ofstream out(fs::path(out_dir) / ("roc_" + name + ".svg"), std::ios::binary);
            if (!out) throw DataError("cannot write roc_" + name + ".svg");
            out << roc_svg(r.pooled_roc, name);
        }
        run_reports.push_back({{"name", name},
                               {"dataset", r.dataset_name},
                               {"algorithm", algorithm_name(r.spec.algorithm)},
                               {"mean_auc", r.mean_auc},
                               {"pooled_auc", r.pooled_auc},
                               {"per_fold_auc", r.per_fold_auc},
                               {"k", r.k},
                               {"seeds", {{"fold", r.fold_seed}, {"model", r.spec.seed}}},
                               {"dataset_digest", r.dataset_digest}});
    }
    {
        std::ofstream out(fs::path(out_dir) / "run.json", std::ios::binary);
        if (!out) throw DataError("cannot write " + out_dir + "/run.json");
        out << nlohmann::json{{"tool", "hitcast"}, {"version", kVersion},
                              {"reports", std::move(run_reports)}}
                   .dump(2)
            << '\n';
    }
}

} // namespace hitcast
