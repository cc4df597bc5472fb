// Python bindings for the core pipeline operations. File-based staging stays
// in the CLI; here the handoffs are in-memory (CSV text in, objects out).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "hitcast/charts.hpp"
#include "hitcast/dataset.hpp"
#include "hitcast/errors.hpp"
#include "hitcast/eval.hpp"
#include "hitcast/features.hpp"
#include "hitcast/learners.hpp"
#include "hitcast/scrobbles.hpp"
#include "hitcast/synth.hpp"
#include "hitcast/text_norm.hpp"
#include "hitcast/version.hpp"

namespace py = pybind11;
using namespace hitcast;

namespace {

FeatTokenSet tokens_or_default(const std::optional<std::vector<std::string>>& tokens) {
    if (!tokens) return FeatTokenSet::defaults();
    return FeatTokenSet::from_tokens(*tokens);
}

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

nlohmann::json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported value in config");
}

LabelTable labels_from_csv(const std::string& chart_csv, int top_n,
                           const std::optional<std::string>& window) {
    std::istringstream in(chart_csv);
    ChartParseOptions opt;
    if (window) opt.window = DateInterval::parse(*window);
    ParseReport report;
    const auto entries = parse_chart_csv(in, opt, report);
    return build_label_table(entries, top_n);
}

Dataset listening_dataset_from_csv(const std::string& scrobble_csv, const LabelTable& labels,
                                   const std::string& window, const std::string& count_mode,
                                   bool include_post_hit) {
    std::istringstream in(scrobble_csv);
    ScrobbleParseOptions popt;
    ParseReport report;
    auto raw = parse_scrobbles(in, popt, report);
    const DateInterval interval = DateInterval::parse(window);
    CleaningSummary summary;
    const auto cleaned = clean_scrobbles(std::move(raw), interval, summary);
    ListeningBuildOptions bopt;
    bopt.window = interval;
    bopt.count_mode = count_mode == "weekly" ? CountMode::weekly : CountMode::cumulative;
    bopt.include_post_hit = include_post_hit;
    return build_listening_dataset(cleaned, labels, bopt);
}

Dataset audio_dataset_from_csv(const std::string& audio_csv, const LabelTable& labels,
                               const std::string& feature_set,
                               const std::set<std::string>& meta_feature_names) {
    std::istringstream in(audio_csv);
    AudioBuildOptions opt;
    opt.feature_set = feature_set == "audio" ? AudioBuildOptions::FeatureSet::audio
                                             : AudioBuildOptions::FeatureSet::meta;
    opt.meta_feature_names = meta_feature_names;
    return build_audio_dataset(in, labels, opt);
}

ModelSpec spec_from_args(const std::string& algorithm, std::uint64_t seed,
                         const py::kwargs& kwargs) {
    const auto algo = algorithm_from_name(algorithm);
    if (!algo) throw UsageError("unknown algorithm '" + algorithm + "'");
    ModelSpec spec = ModelSpec::make(*algo, seed);
    for (const auto& item : kwargs) {
        const auto key = item.first.cast<std::string>();
        if (key == "l2") spec.logistic.l2 = item.second.cast<double>();
        else if (key == "max_epochs") spec.logistic.max_epochs = item.second.cast<int>();
        else if (key == "tol") spec.logistic.tol = item.second.cast<double>();
        else if (key == "var_floor") spec.naive_bayes.var_floor = item.second.cast<double>();
        else if (key == "c") spec.svm.c = item.second.cast<double>();
        else if (key == "epochs") spec.svm.epochs = item.second.cast<int>();
        else if (key == "max_depth") spec.tree.max_depth = item.second.cast<int>();
        else if (key == "min_leaf") spec.tree.min_leaf = item.second.cast<int>();
        else if (key == "grow_fraction") spec.rules.grow_fraction = item.second.cast<double>();
        else throw UsageError("unknown hyperparameter '" + key + "'");
    }
    spec.validate();
    return spec;
}

} // namespace

PYBIND11_MODULE(_hitcast, m) {
    m.doc() = "hit-song prediction pipeline: canonicalization, chart labels, "
              "listening features, classifiers and cross-validated ROC/AUC";
    m.attr("__version__") = kVersion;

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    m.def(
        "normalize_text",
        [](const std::string& raw, const std::optional<std::vector<std::string>>& feat_tokens) {
            return normalize_text(raw, tokens_or_default(feat_tokens));
        },
        py::arg("raw"), py::arg("feat_tokens") = std::nullopt,
        "Canonical form of an artist/title string ('' when nothing survives)");

    py::class_<SongKey>(m, "SongKey")
        .def(py::init([](const std::string& artist, const std::string& title) {
                 return make_song_key(artist, title);
             }),
             py::arg("artist"), py::arg("title"))
        .def_readonly("artist", &SongKey::artist)
        .def_readonly("title", &SongKey::title)
        .def("__eq__", [](const SongKey& a, const SongKey& b) { return a == b; })
        .def("__hash__",
             [](const SongKey& k) { return py::hash(py::make_tuple(k.artist, k.title)); })
        .def("__repr__", [](const SongKey& k) {
            return "SongKey(artist='" + k.artist + "', title='" + k.title + "')";
        });

    m.def("make_song_key", &make_song_key, py::arg("artist"), py::arg("title"),
          py::arg("feat_tokens") = FeatTokenSet::defaults());

    py::class_<LabelTable>(m, "LabelTable")
        .def_static(
            "from_chart_csv",
            [](const std::string& csv, int top_n, const std::optional<std::string>& window) {
                return labels_from_csv(csv, top_n, window);
            },
            py::arg("chart_csv"), py::arg("top_n") = 20, py::arg("window") = std::nullopt)
        .def("__len__", &LabelTable::size)
        .def_property_readonly("hits", &LabelTable::hit_count)
        .def_property_readonly("nonhits", &LabelTable::nonhit_count)
        .def("to_dict",
             [](const LabelTable& t) {
                 py::dict out;
                 for (const auto& [key, label] : t.songs()) {
                     py::dict entry;
                     entry["class"] = label.cls == SongClass::hit ? "hit" : "nonhit";
                     entry["first_hit_week"] =
                         label.first_hit_week ? py::object(py::str(label.first_hit_week->iso()))
                                              : py::object(py::none());
                     out[py::make_tuple(key.artist, key.title)] = entry;
                 }
                 return out;
             })
        .def("save", &LabelTable::save, py::arg("path"))
        .def_static("load", &LabelTable::load, py::arg("path"));

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("name", &Dataset::name)
        .def_property_readonly("n_rows", &Dataset::n_rows)
        .def_property_readonly("n_features", &Dataset::n_features)
        .def_property_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("labels", &Dataset::labels)
        .def_property_readonly("missing_count", &Dataset::missing_count)
        .def("cell", &Dataset::cell, py::arg("row"), py::arg("col"))
        .def("instances",
             [](const Dataset& d) {
                 py::list out;
                 for (const auto& inst : d.instances()) {
                     py::dict item;
                     item["artist"] = inst.song.artist;
                     item["title"] = inst.song.title;
                     item["week_start"] = inst.week_start
                                              ? py::object(py::str(inst.week_start->iso()))
                                              : py::object(py::none());
                     out.append(item);
                 }
                 return out;
             })
        .def("to_dense",
             [](const Dataset& d) {
                 std::vector<std::vector<double>> rows(d.n_rows(),
                                                       std::vector<double>(d.n_features()));
                 for (std::size_t i = 0; i < d.n_rows(); ++i) d.fill_dense_row(i, rows[i]);
                 return rows;
             })
        .def("filter_features",
             [](const Dataset& d, const std::set<std::string>& drop) {
                 return filter_features(d, drop);
             },
             py::arg("drop"))
        .def("save", &Dataset::save, py::arg("directory"))
        .def_static("load", &Dataset::load, py::arg("directory"));

    m.def("build_listening_dataset", &listening_dataset_from_csv, py::arg("scrobble_csv"),
          py::arg("labels"), py::arg("window"), py::arg("count_mode") = "cumulative",
          py::arg("include_post_hit") = false);
    m.def("build_audio_dataset", &audio_dataset_from_csv, py::arg("audio_csv"), py::arg("labels"),
          py::arg("feature_set") = "meta",
          py::arg("meta_feature_names") = std::set<std::string>{});

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_property_readonly("algorithm",
                               [](const TrainedModel& m_) {
                                   return std::string(algorithm_name(m_.algorithm()));
                               })
        .def_property_readonly("n_features", &TrainedModel::n_features)
        .def("score",
             [](const TrainedModel& m_, const std::vector<double>& x) { return m_.score(x); },
             py::arg("x"))
        .def("score_rows",
             [](const TrainedModel& m_, const Dataset& d) { return m_.score_rows(d); },
             py::arg("dataset"))
        .def("to_json", [](const TrainedModel& m_) { return json_to_py(m_.to_json()); })
        .def_static("from_json", [](const py::handle& obj) {
            return TrainedModel::from_json(py_to_json(obj));
        });

    m.def(
        "train",
        [](const std::string& algorithm, const Dataset& data,
           const std::optional<std::vector<std::size_t>>& subset, std::uint64_t seed,
           const py::kwargs& kwargs) {
            const ModelSpec spec = spec_from_args(algorithm, seed, kwargs);
            if (subset) return train(spec, data, *subset);
            return train(spec, data);
        },
        py::arg("algorithm"), py::arg("data"), py::arg("subset") = std::nullopt,
        py::arg("seed") = 42,
        "Train one of: lr, nb, svm, tree, rules (hyperparameters as keyword arguments)");

    m.def(
        "stratified_folds",
        [](const std::vector<int>& labels, int k, std::uint64_t seed) {
            return stratified_folds(labels, k, seed).fold_of;
        },
        py::arg("labels"), py::arg("k"), py::arg("seed") = 42);

    m.def(
        "roc_curve",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            const RocCurve roc = roc_curve(scores, labels);
            return py::make_tuple(roc.points, roc.auc);
        },
        py::arg("scores"), py::arg("labels"),
        "Returns (points, auc); tied scores step diagonally");

    m.def(
        "cross_validate",
        [](const std::string& algorithm, const Dataset& data, int k, std::uint64_t seed,
           const py::kwargs& kwargs) {
            const ModelSpec spec = spec_from_args(algorithm, seed, kwargs);
            return json_to_py(cross_validate(spec, data, k, seed).to_json());
        },
        py::arg("algorithm"), py::arg("data"), py::arg("k") = 10, py::arg("seed") = 42);

    m.def(
        "generate_synthetic",
        [](const py::dict& config) {
            const SynthConfig cfg = SynthConfig::from_json(py_to_json(config));
            const SynthOutput out = generate(cfg);
            py::dict result;
            result["chart_csv"] = out.chart_csv;
            result["scrobble_csv"] = out.scrobble_csv;
            result["truth"] = json_to_py(out.truth);
            return result;
        },
        py::arg("config"),
        "Seeded synthetic chart + scrobble corpus with planted early adopters");
}
