// Python bindings for the core pipeline: feature extraction, reduction,
// resampling, classification, dataset generation, and bundled inference.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "bitsentry/bitstream.hpp"
#include "bitsentry/bundle.hpp"
#include "bitsentry/evaluation.hpp"
#include "bitsentry/features.hpp"
#include "bitsentry/models.hpp"
#include "bitsentry/pipeline.hpp"
#include "bitsentry/smote.hpp"
#include "bitsentry/synth.hpp"
#include "bitsentry/tsvd.hpp"

namespace py = pybind11;
using namespace bitsentry;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols)
            throw Error(ErrorCode::DimensionMismatch, "ragged row " + std::to_string(i));
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Rows from_matrix(const Matrix& m) {
    Rows rows(m.rows, std::vector<double>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        std::copy(m.row(i).begin(), m.row(i).end(), rows[i].begin());
    return rows;
}

std::vector<ClassifierKind> kinds_from_names(const std::vector<std::string>& names) {
    std::vector<ClassifierKind> kinds;
    kinds.reserve(names.size());
    for (const auto& name : names) kinds.push_back(classifier_kind_from_string(name));
    return kinds;
}

TrainConfig make_config(std::size_t rank, std::size_t folds, std::uint64_t seed,
                        const std::vector<std::string>& models) {
    TrainConfig config;
    config.cv.folds = folds;
    config.cv.seed = seed;
    config.prep.tsvd_rank = rank;
    config.kinds = kinds_from_names(models);
    return config;
}

py::dict parse_json(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

py::dict prediction_dict(const PredictionReport& report) {
    py::dict out;
    out["path"] = report.path;
    out["predicted"] = to_string(report.predicted);
    out["confidence"] = report.confidence;
    out["load_ms"] = report.load_ms;
    out["extract_ms"] = report.extract_ms;
    out["predict_ms"] = report.predict_ms;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Static trojan detection for FPGA bitstreams";
    py::register_exception<Error>(m, "Error");

    m.def("label_names", [] { return default_label_table(); },
          "The five class names in label-id order.");

    m.def("model_names", [] {
              std::vector<std::string> names;
              for (ClassifierKind kind : implemented_kinds()) names.push_back(to_string(kind));
              return names;
          },
          "The trainable classifier kinds in reporting order.");

    m.def("byte_histogram",
          [](const py::bytes& data) {
              const std::string_view view = data;
              const FeatureVector bins = byte_histogram(std::span<const std::uint8_t>(
                  reinterpret_cast<const std::uint8_t*>(view.data()), view.size()));
              return std::vector<double>(bins.begin(), bins.end());
          },
          py::arg("data"), "Relative byte-frequency histogram (256 bins summing to 1).");

    m.def("extract_file",
          [](const std::string& path) {
              const BitstreamFile file = load_bitstream(path);
              const FeatureVector bins = byte_histogram(file.payload);
              return std::vector<double>(bins.begin(), bins.end());
          },
          py::arg("path"), "Parse a bitstream file and return its payload histogram.");

    py::class_<TsvdProjector>(m, "TsvdProjector")
        .def_property_readonly("rank", [](const TsvdProjector& p) { return p.rank; })
        .def_property_readonly("components",
                               [](const TsvdProjector& p) { return from_matrix(p.components); })
        .def_property_readonly(
            "singular_values",
            [](const TsvdProjector& p) { return p.singular_values; })
        .def("transform",
             [](const TsvdProjector& p, const Rows& x) {
                 return from_matrix(transform(p, to_matrix(x)));
             },
             py::arg("x"), "Project rows onto the fitted components.");

    m.def("fit_tsvd",
          [](const Rows& x, std::size_t rank) { return fit_tsvd(to_matrix(x), rank); },
          py::arg("x"), py::arg("rank"),
          "Rank-k truncated SVD of the row matrix (no mean centering).");

    m.def("smote",
          [](const Rows& x, const std::vector<int>& y, std::size_t k_neighbors,
             std::uint64_t seed) {
              ResampleConfig cfg;
              cfg.k_neighbors = k_neighbors;
              cfg.seed = seed;
              const ResampledData out = smote_oversample(to_matrix(x), y, cfg);
              return py::make_tuple(from_matrix(out.features), out.labels);
          },
          py::arg("x"), py::arg("y"), py::arg("k_neighbors") = 5, py::arg("seed") = 0,
          "Equalize class counts by synthesizing interpolated minority rows.");

    py::class_<TrainedClassifier>(m, "Classifier")
        .def_property_readonly("kind",
                               [](const TrainedClassifier& c) { return to_string(c.kind); })
        .def_property_readonly("n_classes",
                               [](const TrainedClassifier& c) { return c.n_classes; })
        .def("predict",
             [](const TrainedClassifier& c, const Rows& x) { return predict(c, to_matrix(x)); },
             py::arg("x"))
        .def("predict_proba",
             [](const TrainedClassifier& c, const Rows& x) {
                 return from_matrix(predict_proba(c, to_matrix(x)));
             },
             py::arg("x"));

    m.def("fit_classifier",
          [](const std::string& kind, const Rows& x, const std::vector<int>& y,
             std::uint64_t seed) {
              ClassifierSpec spec;
              spec.kind = classifier_kind_from_string(kind);
              spec.seed = seed;
              return fit(spec, to_matrix(x), y);
          },
          py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("seed") = 0,
          "Train one classifier kind with its default hyperparameters.");

    m.def("generate_dataset",
          [](const std::string& out_dir, std::size_t n_samples, std::uint64_t seed,
             double epsilon) {
              SynthSpec spec;
              spec.seed = seed;
              spec.epsilon = epsilon;
              if (n_samples != spec.n_samples) {
                  spec.n_samples = n_samples;
                  spec.census = default_census_for(n_samples);
              }
              return generate_synthetic_dataset(spec, out_dir).string();
          },
          py::arg("out_dir"), py::arg("n_samples") = 122, py::arg("seed") = 7,
          py::arg("epsilon") = 0.15,
          "Write a labeled synthetic corpus; returns the manifest path.");

    m.def("train",
          [](const std::string& manifest, const std::string& out_path, std::size_t rank,
             std::size_t folds, std::uint64_t seed, const std::vector<std::string>& models) {
              const TrainOutcome outcome =
                  train_bundle(manifest, make_config(rank, folds, seed, models));
              save_bundle(outcome.bundle, out_path);
              py::dict out;
              out["bundle"] = out_path;
              out["digest"] = bundle_digest(outcome.bundle);
              out["best_model"] = to_string(outcome.report.best().kind);
              out["report"] = parse_json(report_to_json(outcome.report));
              return out;
          },
          py::arg("manifest"), py::arg("out_path"), py::arg("rank") = 16,
          py::arg("folds") = 5, py::arg("seed") = 7,
          py::arg("models") = std::vector<std::string>{},
          "Cross-validate, refit the winner on the full dataset, save the bundle.");

    m.def("evaluate",
          [](const std::string& manifest, std::size_t rank, std::size_t folds,
             std::uint64_t seed, const std::vector<std::string>& models) {
              const TrainConfig config = make_config(rank, folds, seed, models);
              const DatasetMatrix dataset = load_dataset(manifest);
              const auto specs = make_specs(config.kinds, config.cv.seed);
              const EvaluationReport report =
                  cross_validate(dataset, specs, config.cv, config.prep);
              return parse_json(report_to_json(report));
          },
          py::arg("manifest"), py::arg("rank") = 16, py::arg("folds") = 5, py::arg("seed") = 7,
          py::arg("models") = std::vector<std::string>{},
          "Stratified cross-validation report as a dict.");

    m.def("predict_file",
          [](const std::string& bundle_path, const std::string& file_path) {
              return prediction_dict(predict_file(load_bundle(bundle_path), file_path));
          },
          py::arg("bundle_path"), py::arg("file_path"),
          "Classify one bitstream file with a saved bundle.");
}
