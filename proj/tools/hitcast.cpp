// hitcast: chart-label ingestion, scrobble cleaning, feature building, and
// cross-validated hit prediction over file-based stage handoffs.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal
// invariant violation. Informational output goes to stderr; stdout carries
// one-line JSON summaries when --json is passed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hitcast/charts.hpp"
#include "hitcast/csv.hpp"
#include "hitcast/dataset.hpp"
#include "hitcast/dates.hpp"
#include "hitcast/digest.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/eval.hpp"
#include "hitcast/features.hpp"
#include "hitcast/scrobbles.hpp"
#include "hitcast/synth.hpp"
#include "hitcast/text_norm.hpp"
#include "hitcast/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kChartWindowDefault = "2011-07-02..2013-11-16";
constexpr const char* kListenWindowDefault = "2013-04-16..2013-11-16";

std::string now_iso_utc() {
    const auto t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hitcast::DataError("cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json load_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hitcast::DataError("cannot open " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw hitcast::DataError(path.string() + ": " + e.what());
    }
}

// The manifest is the one place a timestamp appears, in one field, so output
// directories stay byte-comparable.
void write_manifest(const fs::path& out_dir, const std::string& subcommand, json flags,
                    const std::vector<std::string>& input_paths,
                    std::optional<std::uint64_t> seed = std::nullopt) {
    json inputs = json::object();
    for (const auto& p : input_paths) inputs[p] = hitcast::digest_file(p);
    json manifest{{"tool", "hitcast"},
                  {"version", hitcast::kVersion},
                  {"subcommand", subcommand},
                  {"created_at", now_iso_utc()},
                  {"flags", std::move(flags)},
                  {"inputs", std::move(inputs)}};
    if (seed) manifest["seed"] = *seed;
    write_json(out_dir / "manifest.json", manifest);
}

void emit_summary(bool as_json, const json& summary, const std::string& text) {
    if (as_json) std::cout << summary.dump() << '\n';
    std::cerr << text << '\n';
}

hitcast::FeatTokenSet load_feat_tokens(const std::string& path) {
    if (path.empty()) return hitcast::FeatTokenSet::defaults();
    return hitcast::FeatTokenSet::load(path);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct IngestChartsOpts {
    std::string input, out, window = kChartWindowDefault, feat_tokens;
    int top_n = 20;
    double max_reject_frac = 0.10;
    bool as_json = false;
};

int run_ingest_charts(const IngestChartsOpts& opt) {
    const auto window = hitcast::DateInterval::parse(opt.window);
    const auto feat = load_feat_tokens(opt.feat_tokens);

    std::ifstream in(opt.input, std::ios::binary);
    if (!in) throw hitcast::DataError("cannot open " + opt.input);
    hitcast::ChartParseOptions popt;
    popt.window = window;
    popt.max_reject_fraction = opt.max_reject_frac;
    popt.feat_tokens = &feat;
    hitcast::ParseReport report;
    const auto entries = hitcast::parse_chart_csv(in, popt, report);

    hitcast::LabelSummary summary;
    const auto table = hitcast::build_label_table(entries, opt.top_n, &summary);

    fs::create_directories(opt.out);
    table.save((fs::path(opt.out) / "labels.json").string());
    {
        std::ofstream rejects(fs::path(opt.out) / "rejects.csv", std::ios::binary);
        report.write_rejects_csv(rejects);
    }
    const json sum{{"window", opt.window},
                   {"top_n", opt.top_n},
                   {"entries", summary.entries},
                   {"unique_songs", summary.unique_songs},
                   {"hits", summary.hits},
                   {"nonhits", summary.nonhits},
                   {"excluded_main_only", summary.excluded},
                   {"rows",
                    {{"total", report.rows_total},
                     {"ok", report.rows_ok},
                     {"rejected", report.rows_rejected},
                     {"out_of_window", report.rows_out_of_window}}}};
    write_json(fs::path(opt.out) / "summary.json", sum);
    write_manifest(opt.out, "ingest-charts",
                   json{{"input", opt.input},
                        {"top_n", opt.top_n},
                        {"window", opt.window},
                        {"feat_tokens", opt.feat_tokens},
                        {"max_reject_frac", opt.max_reject_frac}},
                   {opt.input});
    emit_summary(opt.as_json, sum,
                 "labeled " + std::to_string(summary.unique_songs) + " songs (" +
                     std::to_string(summary.hits) + " hits, " + std::to_string(summary.nonhits) +
                     " non-hits) from " + std::to_string(summary.entries) + " entries");
    return 0;
}

struct IngestScrobblesOpts {
    std::string input, out, window = kListenWindowDefault, feat_tokens;
    double max_reject_frac = 0.10;
    bool as_json = false;
};

int run_ingest_scrobbles(const IngestScrobblesOpts& opt) {
    const auto window = hitcast::DateInterval::parse(opt.window);
    const auto feat = load_feat_tokens(opt.feat_tokens);

    std::ifstream in(opt.input, std::ios::binary);
    if (!in) throw hitcast::DataError("cannot open " + opt.input);
    hitcast::ScrobbleParseOptions popt;
    popt.max_reject_fraction = opt.max_reject_frac;
    popt.feat_tokens = &feat;
    hitcast::ParseReport report;
    auto raw = hitcast::parse_scrobbles(in, popt, report);

    hitcast::CleaningSummary cleaning;
    const auto cleaned = hitcast::clean_scrobbles(std::move(raw), window, cleaning);

    fs::create_directories(opt.out);
    {
        std::ofstream out(fs::path(opt.out) / "scrobbles.csv", std::ios::binary);
        if (!out) throw hitcast::DataError("cannot write " + opt.out + "/scrobbles.csv");
        hitcast::write_scrobbles_csv(out, cleaned);
    }
    {
        std::ofstream rejects(fs::path(opt.out) / "rejects.csv", std::ios::binary);
        report.write_rejects_csv(rejects);
    }
    json cleaning_json = cleaning.to_json();
    cleaning_json["window"] = opt.window;
    cleaning_json["rows"] = {{"total", report.rows_total},
                             {"ok", report.rows_ok},
                             {"rejected", report.rows_rejected}};
    write_json(fs::path(opt.out) / "cleaning.json", cleaning_json);
    write_manifest(opt.out, "ingest-scrobbles",
                   json{{"input", opt.input},
                        {"window", opt.window},
                        {"feat_tokens", opt.feat_tokens},
                        {"max_reject_frac", opt.max_reject_frac}},
                   {opt.input});
    emit_summary(opt.as_json, cleaning_json,
                 "retained " + std::to_string(cleaning.retained) + " of " +
                     std::to_string(cleaning.input) + " scrobbles");
    return 0;
}

struct BuildFeaturesOpts {
    std::string mode;  // listening | audio
    std::string labels_dir, scrobbles_dir, audio_csv, out, name;
    std::string feature_set = "meta";
    std::string meta_features;  // file: one name per line
    std::string count_mode = "cumulative";
    std::string window;  // optional override; default from the scrobbles dir
    std::string feat_tokens;
    bool include_post_hit = false;
    bool as_json = false;
};

std::set<std::string> load_name_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hitcast::DataError("cannot open meta-feature list: " + path);
    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        names.insert(line.substr(b, e - b + 1));
    }
    if (names.empty()) throw hitcast::DataError("meta-feature list is empty: " + path);
    return names;
}

int run_build_features(const BuildFeaturesOpts& opt) {
    const auto labels =
        hitcast::LabelTable::load((fs::path(opt.labels_dir) / "labels.json").string());
    std::vector<std::string> input_paths{(fs::path(opt.labels_dir) / "labels.json").string()};

    hitcast::Dataset dataset;
    hitcast::JoinReport join;
    if (opt.mode == "listening") {
        const fs::path scrobbles_csv = fs::path(opt.scrobbles_dir) / "scrobbles.csv";
        input_paths.push_back(scrobbles_csv.string());

        std::string window_str = opt.window;
        if (window_str.empty()) {
            const json cleaning = load_json(fs::path(opt.scrobbles_dir) / "cleaning.json");
            window_str = cleaning.at("window").get<std::string>();
        }
        hitcast::ListeningBuildOptions bopt;
        bopt.window = hitcast::DateInterval::parse(window_str);
        bopt.count_mode = opt.count_mode == "weekly" ? hitcast::CountMode::weekly
                                                     : hitcast::CountMode::cumulative;
        bopt.include_post_hit = opt.include_post_hit;

        std::ifstream in(scrobbles_csv, std::ios::binary);
        if (!in) throw hitcast::DataError("cannot open " + scrobbles_csv.string());
        hitcast::ScrobbleParseOptions popt;
        hitcast::ParseReport parse_report;
        const auto scrobbles = hitcast::parse_scrobbles(in, popt, parse_report);
        dataset = hitcast::build_listening_dataset(scrobbles, labels, bopt, &join);
    } else {
        input_paths.push_back(opt.audio_csv);
        hitcast::AudioBuildOptions bopt;
        bopt.feature_set = opt.feature_set == "audio"
                               ? hitcast::AudioBuildOptions::FeatureSet::audio
                               : hitcast::AudioBuildOptions::FeatureSet::meta;
        hitcast::FeatTokenSet feat = load_feat_tokens(opt.feat_tokens);
        bopt.feat_tokens = &feat;
        if (!opt.meta_features.empty()) bopt.meta_feature_names = load_name_list(opt.meta_features);

        std::ifstream in(opt.audio_csv, std::ios::binary);
        if (!in) throw hitcast::DataError("cannot open " + opt.audio_csv);
        dataset = hitcast::build_audio_dataset(in, labels, bopt, &join);
    }

    if (!opt.name.empty()) dataset.set_name(opt.name);
    dataset.save(opt.out);
    write_manifest(opt.out, "build-features",
                   json{{"mode", opt.mode},
                        {"labels", opt.labels_dir},
                        {"scrobbles", opt.scrobbles_dir},
                        {"audio_csv", opt.audio_csv},
                        {"feature_set", opt.feature_set},
                        {"meta_features", opt.meta_features},
                        {"count_mode", opt.count_mode},
                        {"include_post_hit", opt.include_post_hit},
                        {"window", opt.window},
                        {"name", opt.name}},
                   input_paths);
    const json sum{{"name", dataset.name()},
                   {"rows", dataset.n_rows()},
                   {"features", dataset.n_features()},
                   {"positives", dataset.positives()},
                   {"negatives", dataset.negatives()},
                   {"missing_cells", dataset.missing_count()},
                   {"join", join.to_json()}};
    emit_summary(opt.as_json, sum,
                 "built " + dataset.name() + ": " + std::to_string(dataset.n_rows()) +
                     " rows x " + std::to_string(dataset.n_features()) + " features (" +
                     std::to_string(dataset.positives()) + " positive)");
    return 0;
}

struct EvaluateOpts {
    std::string dataset_dir, out;
    std::string algorithms = "lr,nb,svm,tree,rules";
    int k = 10;
    std::uint64_t seed = 42;
    bool as_json = false;
};

int run_evaluate(const EvaluateOpts& opt) {
    const auto dataset = hitcast::Dataset::load(opt.dataset_dir);

    std::vector<hitcast::Algorithm> algos;
    {
        std::stringstream ss(opt.algorithms);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto a = hitcast::algorithm_from_name(item);
            if (!a)
                throw hitcast::UsageError("unknown algorithm '" + item +
                                          "' (expected lr, nb, svm, tree or rules)");
            algos.push_back(*a);
        }
        if (algos.empty()) throw hitcast::UsageError("--algorithms lists no algorithms");
    }

    std::vector<hitcast::CvReport> reports;
    for (const auto algo : algos) {
        const auto spec = hitcast::ModelSpec::make(algo, opt.seed);
        std::cerr << "cross-validating " << hitcast::algorithm_short_name(algo) << " (k=" << opt.k
                  << ", seed=" << opt.seed << ")\n";
        reports.push_back(hitcast::cross_validate(spec, dataset, opt.k, opt.seed));
    }

    fs::create_directories(opt.out);
    for (const auto& r : reports)
        write_json(fs::path(opt.out) /
                       ("cv_" + std::string(hitcast::algorithm_short_name(r.spec.algorithm)) +
                        ".json"),
                   r.to_json());
    hitcast::emit_report(reports, opt.out);

    const fs::path meta = fs::path(opt.dataset_dir) / "meta.json";
    const fs::path values_sparse = fs::path(opt.dataset_dir) / "features.sparse.csv";
    const fs::path values_dense = fs::path(opt.dataset_dir) / "features.csv";
    std::vector<std::string> inputs{meta.string()};
    inputs.push_back(fs::exists(values_sparse) ? values_sparse.string() : values_dense.string());
    write_manifest(opt.out, "evaluate",
                   json{{"dataset", opt.dataset_dir},
                        {"algorithms", opt.algorithms},
                        {"k", opt.k},
                        {"seed", opt.seed}},
                   inputs, opt.seed);

    json algo_summaries = json::array();
    std::string text = "mean AUC:";
    for (const auto& r : reports) {
        algo_summaries.push_back({{"algorithm", hitcast::algorithm_short_name(r.spec.algorithm)},
                                  {"mean_auc", r.mean_auc},
                                  {"pooled_auc", r.pooled_auc}});
        text += ' ';
        text += hitcast::algorithm_short_name(r.spec.algorithm);
        text += '=' + hitcast::format_double_fixed(r.mean_auc, 4);
    }
    emit_summary(opt.as_json, json{{"dataset", dataset.name()}, {"reports", algo_summaries}},
                 text);
    return 0;
}

struct SynthOpts {
    std::string config, out;
    bool as_json = false;
};

int run_synth(const SynthOpts& opt) {
    const auto cfg = hitcast::SynthConfig::load(opt.config);
    const auto generated = hitcast::generate(cfg);
    fs::create_directories(opt.out);
    write_text(fs::path(opt.out) / "charts.csv", generated.chart_csv);
    write_text(fs::path(opt.out) / "scrobbles.csv", generated.scrobble_csv);
    write_json(fs::path(opt.out) / "truth.json", generated.truth);
    write_manifest(opt.out, "synth", json{{"config", opt.config}}, {opt.config}, cfg.seed);

    const auto count_lines = [](const std::string& s) {
        std::size_t n = 0;
        for (char c : s)
            if (c == '\n') ++n;
        return n > 0 ? n - 1 : 0;  // minus header
    };
    const json sum{{"window", generated.truth.at("window")},
                   {"chart_rows", count_lines(generated.chart_csv)},
                   {"scrobble_rows", count_lines(generated.scrobble_csv)},
                   {"hits", generated.truth.at("hits").size()},
                   {"adopters", generated.truth.at("adopters").size()}};
    emit_summary(opt.as_json, sum,
                 "generated " + std::to_string(sum.at("chart_rows").get<std::size_t>()) +
                     " chart rows and " +
                     std::to_string(sum.at("scrobble_rows").get<std::size_t>()) +
                     " scrobbles");
    return 0;
}

struct ReportOpts {
    std::vector<std::string> runs;
    std::string out;
    bool as_json = false;
};

int run_report(const ReportOpts& opt) {
    std::vector<hitcast::CvReport> reports;
    std::vector<std::string> inputs;
    for (const auto& dir : opt.runs) {
        bool found = false;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const auto name = entry.path().filename().string();
            if (name.rfind("cv_", 0) == 0 && entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            reports.push_back(hitcast::CvReport::from_json(load_json(f)));
            inputs.push_back(f.string());
            found = true;
        }
        if (!found)
            throw hitcast::DataError("no cv_*.json reports under " + dir);
    }
    hitcast::emit_report(reports, opt.out);
    write_manifest(opt.out, "report", json{{"runs", opt.runs}}, inputs);
    emit_summary(opt.as_json, json{{"reports", reports.size()}},
                 "merged " + std::to_string(reports.size()) + " reports");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hit-song prediction pipeline"};
    app.set_version_flag("--version", hitcast::kVersion);
    app.require_subcommand(1);

    IngestChartsOpts charts_opt;
    auto* charts_cmd =
        app.add_subcommand("ingest-charts", "parse weekly charts into a hit/non-hit label table");
    charts_cmd->add_option("--input", charts_opt.input, "chart CSV")->required();
    charts_cmd->add_option("--out", charts_opt.out, "output directory")->required();
    charts_cmd->add_option("--top-n", charts_opt.top_n, "hit threshold position");
    charts_cmd->add_option("--window", charts_opt.window, "observation window A..B");
    charts_cmd->add_option("--feat-tokens", charts_opt.feat_tokens,
                           "featuring-token file, one per line");
    charts_cmd->add_option("--max-reject-frac", charts_opt.max_reject_frac,
                           "fatal reject fraction ceiling");
    charts_cmd->add_flag("--json", charts_opt.as_json, "machine-readable summary on stdout");

    IngestScrobblesOpts scrob_opt;
    auto* scrob_cmd =
        app.add_subcommand("ingest-scrobbles", "parse and clean listening records");
    scrob_cmd->add_option("--input", scrob_opt.input, "scrobble CSV")->required();
    scrob_cmd->add_option("--out", scrob_opt.out, "output directory")->required();
    scrob_cmd->add_option("--window", scrob_opt.window, "listening window A..B");
    scrob_cmd->add_option("--feat-tokens", scrob_opt.feat_tokens,
                          "featuring-token file, one per line");
    scrob_cmd->add_option("--max-reject-frac", scrob_opt.max_reject_frac,
                          "fatal reject fraction ceiling");
    scrob_cmd->add_flag("--json", scrob_opt.as_json, "machine-readable summary on stdout");

    BuildFeaturesOpts feat_opt;
    auto* feat_cmd = app.add_subcommand("build-features", "build a model-ready dataset");
    feat_cmd->add_option("--mode", feat_opt.mode, "listening or audio")
        ->required()
        ->check(CLI::IsMember({"listening", "audio"}));
    feat_cmd->add_option("--labels", feat_opt.labels_dir, "ingest-charts output directory")
        ->required();
    feat_cmd->add_option("--scrobbles", feat_opt.scrobbles_dir,
                         "ingest-scrobbles output directory (listening mode)");
    feat_cmd->add_option("--audio-csv", feat_opt.audio_csv, "audio feature CSV (audio mode)");
    feat_cmd->add_option("--feature-set", feat_opt.feature_set, "meta or audio")
        ->check(CLI::IsMember({"meta", "audio"}));
    feat_cmd->add_option("--meta-features", feat_opt.meta_features,
                         "meta-feature name file, one per line");
    feat_cmd->add_option("--count-mode", feat_opt.count_mode, "cumulative or weekly")
        ->check(CLI::IsMember({"cumulative", "weekly"}));
    feat_cmd->add_flag("--include-post-hit", feat_opt.include_post_hit,
                       "keep post-hit rows of hit songs as label 0");
    feat_cmd->add_option("--window", feat_opt.window,
                         "window override (default: the scrobbles directory's window)");
    feat_cmd->add_option("--name", feat_opt.name, "dataset name for reports");
    feat_cmd->add_option("--out", feat_opt.out, "output directory")->required();
    feat_cmd->add_option("--feat-tokens", feat_opt.feat_tokens,
                         "featuring-token file, one per line");
    feat_cmd->add_flag("--json", feat_opt.as_json, "machine-readable summary on stdout");

    EvaluateOpts eval_opt;
    auto* eval_cmd =
        app.add_subcommand("evaluate", "stratified k-fold cross-validation with ROC/AUC");
    eval_cmd->add_option("--dataset", eval_opt.dataset_dir, "build-features output directory")
        ->required();
    eval_cmd->add_option("--out", eval_opt.out, "output directory")->required();
    eval_cmd->add_option("--algorithms", eval_opt.algorithms,
                         "comma list of lr, nb, svm, tree, rules");
    eval_cmd->add_option("--k", eval_opt.k, "number of folds");
    eval_cmd->add_option("--seed", eval_opt.seed, "fold/model seed");
    eval_cmd->add_flag("--json", eval_opt.as_json, "machine-readable summary on stdout");

    SynthOpts synth_opt;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic chart + scrobble corpus");
    synth_cmd->add_option("--config", synth_opt.config, "synth config JSON")->required();
    synth_cmd->add_option("--out", synth_opt.out, "output directory")->required();
    synth_cmd->add_flag("--json", synth_opt.as_json, "machine-readable summary on stdout");

    ReportOpts report_opt;
    auto* report_cmd = app.add_subcommand("report", "merge evaluate runs into one table");
    report_cmd->add_option("--runs", report_opt.runs, "evaluate output directories")
        ->required()
        ->expected(-1);
    report_cmd->add_option("--out", report_opt.out, "output directory")->required();
    report_cmd->add_flag("--json", report_opt.as_json, "machine-readable summary on stdout");

    try {
        app.parse(argc, argv);

        if (charts_cmd->parsed()) return run_ingest_charts(charts_opt);
        if (scrob_cmd->parsed()) return run_ingest_scrobbles(scrob_opt);
        if (feat_cmd->parsed()) {
            // flag dependencies beyond what CLI11 expresses
            if (feat_opt.mode == "listening" && feat_opt.scrobbles_dir.empty())
                throw hitcast::UsageError("--mode listening requires --scrobbles");
            if (feat_opt.mode == "audio" && feat_opt.audio_csv.empty())
                throw hitcast::UsageError("--mode audio requires --audio-csv");
            if (feat_opt.mode == "audio" && feat_opt.feature_set == "audio" &&
                feat_opt.meta_features.empty())
                throw hitcast::UsageError("--feature-set audio requires --meta-features");
            return run_build_features(feat_opt);
        }
        if (eval_cmd->parsed()) return run_evaluate(eval_opt);
        if (synth_cmd->parsed()) return run_synth(synth_opt);
        if (report_cmd->parsed()) return run_report(report_opt);
        throw hitcast::UsageError("no subcommand given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return 1;
    } catch (const hitcast::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const hitcast::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const hitcast::InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
