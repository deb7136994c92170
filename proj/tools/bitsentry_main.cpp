// Command-line front door: extract, synth-dataset, train, evaluate, predict.
// Exit codes: 0 success, 2 usage error, 3 data/parse error, 4 bundle error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bitsentry/bitstream.hpp"
#include "bitsentry/bundle.hpp"
#include "bitsentry/error.hpp"
#include "bitsentry/evaluation.hpp"
#include "bitsentry/features.hpp"
#include "bitsentry/pipeline.hpp"
#include "bitsentry/synth.hpp"

namespace {

using bitsentry::Error;
using bitsentry::ErrorCode;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidSpec:
        case ErrorCode::RankOutOfRange:
        case ErrorCode::Unimplemented:
            return 2;
        case ErrorCode::BundleFormat:
        case ErrorCode::DimensionMismatch:
            return 4;
        default:
            return 3;
    }
}

std::vector<bitsentry::ClassifierKind> parse_model_list(const std::string& csv) {
    std::vector<bitsentry::ClassifierKind> kinds;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) kinds.push_back(bitsentry::classifier_kind_from_string(item));
    return kinds;
}

struct CommonFlags {
    bool json = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_flag("--json", flags.json, "Emit machine-readable JSON on stdout");
    cmd->add_flag("--quiet", flags.quiet, "Suppress informational output");
}

int run_extract(const std::string& path, const CommonFlags& flags) {
    const bitsentry::BitstreamFile file = bitsentry::load_bitstream(path);
    const bitsentry::FeatureVector bins = bitsentry::byte_histogram(file.payload);
    if (flags.json) {
        nlohmann::json doc;
        doc["path"] = path;
        doc["payload_bytes"] = file.payload.size();
        doc["bins"] = bins;
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    if (!flags.quiet)
        for (std::size_t b = 0; b < bins.size(); ++b)
            if (bins[b] != 0.0) std::printf("0x%02zx %.6f\n", b, bins[b]);
    return 0;
}

int run_synth(const bitsentry::SynthSpec& spec, const std::string& out_dir,
              const CommonFlags& flags) {
    const std::filesystem::path manifest = bitsentry::generate_synthetic_dataset(spec, out_dir);
    if (flags.json) {
        nlohmann::json doc;
        doc["manifest"] = manifest.string();
        doc["samples"] = spec.n_samples;
        doc["seed"] = spec.seed;
        doc["epsilon"] = spec.epsilon;
        std::cout << doc.dump(2) << "\n";
    } else if (!flags.quiet) {
        std::cout << manifest.string() << "\n";
    }
    return 0;
}

int run_train(const std::string& manifest, const std::string& out_path,
              const bitsentry::TrainConfig& config, const CommonFlags& flags) {
    const bitsentry::TrainOutcome outcome = bitsentry::train_bundle(manifest, config);
    bitsentry::save_bundle(outcome.bundle, out_path);
    const std::string report_path = out_path + ".report.json";
    {
        std::ofstream report(report_path, std::ios::binary);
        if (!report) throw Error(ErrorCode::IoError, "cannot write " + report_path);
        report << bitsentry::report_to_json(outcome.report);
    }
    const std::string digest = bitsentry::bundle_digest(outcome.bundle);
    if (flags.json) {
        nlohmann::json doc;
        doc["bundle"] = out_path;
        doc["digest"] = digest;
        doc["report_path"] = report_path;
        doc["best_model"] = to_string(outcome.report.best().kind);
        std::cout << doc.dump(2) << "\n";
    } else if (!flags.quiet) {
        std::cout << bitsentry::format_report_table(outcome.report);
        std::cout << "bundle: " << out_path << " digest=" << digest << "\n";
    }
    return 0;
}

int run_evaluate(const std::string& manifest, const bitsentry::TrainConfig& config,
                 const CommonFlags& flags) {
    const bitsentry::DatasetMatrix dataset = bitsentry::load_dataset(manifest);
    const auto specs = bitsentry::make_specs(config.kinds, config.cv.seed);
    const bitsentry::EvaluationReport report =
        bitsentry::cross_validate(dataset, specs, config.cv, config.prep);
    if (flags.json)
        std::cout << bitsentry::report_to_json(report);
    else if (!flags.quiet)
        std::cout << bitsentry::format_report_table(report);
    return 0;
}

int run_predict(const std::string& bundle_path, const std::string& file, bool no_timing,
                const CommonFlags& flags) {
    const bitsentry::ModelBundle bundle = bitsentry::load_bundle(bundle_path);
    const bitsentry::PredictionReport report = bitsentry::predict_file(bundle, file);
    if (flags.json) {
        nlohmann::json doc;
        doc["path"] = report.path;
        doc["predicted"] = to_string(report.predicted);
        doc["confidence"] = report.confidence;
        if (!no_timing) {
            doc["load_ms"] = report.load_ms;
            doc["extract_ms"] = report.extract_ms;
            doc["predict_ms"] = report.predict_ms;
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << bitsentry::format_prediction_line(report, !no_timing) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static trojan detection for FPGA bitstreams"};
    app.require_subcommand(1);

    CommonFlags extract_flags;
    std::string extract_path;
    CLI::App* extract = app.add_subcommand("extract", "Print a file's byte-value histogram");
    extract->add_option("file", extract_path, "Bitstream file")->required();
    add_common(extract, extract_flags);

    CommonFlags synth_flags;
    bitsentry::SynthSpec synth_spec;
    std::string synth_out;
    CLI::App* synth = app.add_subcommand("synth-dataset", "Generate a labeled synthetic corpus");
    synth->add_option("--out", synth_out, "Output directory")->required();
    std::size_t synth_samples = synth_spec.n_samples;
    synth->add_option("--samples", synth_samples, "Total sample count");
    synth->add_option("--seed", synth_spec.seed, "Generator seed");
    synth->add_option("--epsilon", synth_spec.epsilon, "Trojan signature weight in [0,1)");
    add_common(synth, synth_flags);

    CommonFlags train_flags;
    bitsentry::TrainConfig train_config;
    train_config.cv.seed = 7;
    std::string train_manifest, train_out, train_models;
    CLI::App* train = app.add_subcommand("train", "Cross-validate, refit the winner, and bundle");
    train->add_option("--manifest", train_manifest, "Training manifest CSV")->required();
    train->add_option("--out", train_out, "Bundle output path (*.bsdm)")->required();
    train->add_option("--rank", train_config.prep.tsvd_rank, "TSVD rank");
    train->add_option("--folds", train_config.cv.folds, "Cross-validation folds");
    train->add_option("--models", train_models, "Comma-separated classifier kinds");
    train->add_option("--seed", train_config.cv.seed, "Master seed");
    add_common(train, train_flags);

    CommonFlags eval_flags;
    bitsentry::TrainConfig eval_config;
    eval_config.cv.seed = 7;
    std::string eval_manifest, eval_models;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Cross-validate and print the score table");
    evaluate->add_option("--manifest", eval_manifest, "Manifest CSV")->required();
    evaluate->add_option("--folds", eval_config.cv.folds, "Cross-validation folds");
    evaluate->add_option("--seed", eval_config.cv.seed, "Master seed");
    evaluate->add_option("--rank", eval_config.prep.tsvd_rank, "TSVD rank");
    evaluate->add_option("--models", eval_models, "Comma-separated classifier kinds");
    add_common(evaluate, eval_flags);

    CommonFlags predict_flags;
    std::string predict_bundle, predict_path;
    bool predict_no_timing = false;
    CLI::App* predict = app.add_subcommand("predict", "Classify one bitstream file");
    predict->add_option("--model", predict_bundle, "Bundle path")->required();
    predict->add_option("file", predict_path, "Bitstream file")->required();
    predict->add_flag("--no-timing", predict_no_timing, "Omit phase timings (stable output)");
    add_common(predict, predict_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (extract->parsed()) return run_extract(extract_path, extract_flags);
        if (synth->parsed()) {
            if (synth_samples != synth_spec.n_samples) {
                synth_spec.n_samples = synth_samples;
                synth_spec.census = bitsentry::default_census_for(synth_samples);
            }
            return run_synth(synth_spec, synth_out, synth_flags);
        }
        if (train->parsed()) {
            if (!train_models.empty()) train_config.kinds = parse_model_list(train_models);
            return run_train(train_manifest, train_out, train_config, train_flags);
        }
        if (evaluate->parsed()) {
            if (!eval_models.empty()) eval_config.kinds = parse_model_list(eval_models);
            return run_evaluate(eval_manifest, eval_config, eval_flags);
        }
        if (predict->parsed())
            return run_predict(predict_bundle, predict_path, predict_no_timing, predict_flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
