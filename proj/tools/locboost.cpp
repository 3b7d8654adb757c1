// Command-line front end: synthetic data generation, training, detection
// extraction, and evaluation over the text formats in locboost/model_io.hpp.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "locboost/boost.hpp"
#include "locboost/model_io.hpp"
#include "locboost/textio.hpp"

namespace fs = std::filesystem;
using namespace locboost;

namespace {

struct CommonEvalArgs {
    std::string detections_path;
    std::string manifest_path;
    std::string partition = "test";
    double delta = 10.0;
};

// Joins a detections file with the manifest ground truth.
std::vector<EvalImage> load_eval_set(const CommonEvalArgs& args) {
    const Dataset dataset = load_dataset(args.manifest_path);
    const auto wanted = partition_from_name(args.partition);
    std::map<std::string, const LabeledImage*> by_id;
    for (const LabeledImage& item : dataset.items) {
        if (item.partition == wanted) by_id[item.id] = &item;
    }
    std::map<std::string, std::vector<ScoredLocation>> detections;
    for (const ImageDetections& image : read_detections(args.detections_path)) {
        if (!by_id.count(image.image_id)) {
            throw std::runtime_error("detections reference unknown " + args.partition +
                                     " image: " + image.image_id);
        }
        detections[image.image_id] = image.detections;
    }
    std::vector<EvalImage> out;
    for (const auto& [id, item] : by_id) {
        EvalImage e;
        e.truth = item->centers;
        if (auto it = detections.find(id); it != detections.end()) e.detections = it->second;
        out.push_back(std::move(e));
    }
    return out;
}

void add_eval_options(CLI::App* cmd, CommonEvalArgs& args) {
    cmd->add_option("--detections", args.detections_path, "Detections file")->required();
    cmd->add_option("--data", args.manifest_path, "Dataset manifest")->required();
    cmd->add_option("--partition", args.partition, "Partition to score against");
    cmd->add_option("--delta", args.delta, "Match distance in pixels");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Location-based boosting for small object detection"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    synth_cmd->set_config("--config");
    SynthConfig synth_cfg;
    std::string synth_out;
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_cfg.seed, "RNG seed");
    synth_cmd->add_option("--train-images", synth_cfg.train_images, "Images in train partition");
    synth_cmd->add_option("--validation-images", synth_cfg.validation_images,
                          "Images in validation partition");
    synth_cmd->add_option("--test-images", synth_cfg.test_images, "Images in test partition");
    synth_cmd->add_option("--width", synth_cfg.width, "Image width");
    synth_cmd->add_option("--height", synth_cfg.height, "Image height");
    synth_cmd->add_option("--objects-min", synth_cfg.min_objects, "Min objects per image");
    synth_cmd->add_option("--objects-max", synth_cfg.max_objects, "Max objects per image");
    synth_cmd->add_option("--radius-min", synth_cfg.min_radius, "Min object radius");
    synth_cmd->add_option("--radius-max", synth_cfg.max_radius, "Max object radius");
    synth_cmd->add_option("--bg-intensity", synth_cfg.background_intensity,
                          "Background intensity");
    synth_cmd->add_option("--object-offset", synth_cfg.object_offset,
                          "Object intensity offset");
    synth_cmd->add_option("--noise", synth_cfg.noise_amplitude, "Noise amplitude");
    synth_cmd->add_option("--kernel-radius", synth_cfg.kernel_radius,
                          "Correlation radius entering the center separation guarantee");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train an ensemble on the train partition");
    train_cmd->set_config("--config");
    TrainConfig train_cfg;
    std::string train_manifest, model_out, log_path;
    std::string grammar = "rich", kernel_shape = "flat", mode = "capped", loss = "hinge";
    bool run_validation = false;
    train_cmd->add_option("--data", train_manifest, "Dataset manifest")->required();
    train_cmd->add_option("--out", model_out, "Model file to write")->required();
    train_cmd->add_option("--iterations", train_cfg.iterations, "Boosting iterations");
    train_cmd->add_option("--candidates", train_cfg.candidates_per_iteration,
                          "Candidate features per iteration");
    train_cmd->add_option("--grammar", grammar, "Feature grammar: rich|haar");
    train_cmd->add_option("--kernel", kernel_shape, "Kernel shape: flat|linear|quadratic");
    train_cmd->add_option("--radius", train_cfg.kernel_radius, "Correlation radius");
    train_cmd->add_option("--mode", mode, "Evidence mode: capped|unique");
    train_cmd->add_option("--rho", train_cfg.dont_care_radius, "Don't-care radius");
    train_cmd->add_option("--alpha-max", train_cfg.alpha_max, "Hit weight cap");
    double discount = 0.0;
    auto* discount_opt =
        train_cmd->add_option("--discount", discount, "Background discount override");
    train_cmd->add_option("--loss", loss, "Loss mode: hinge|smooth");
    train_cmd->add_option("--seed", train_cfg.seed, "RNG seed");
    train_cmd->add_option("--log", log_path, "Also write the progress stream to this file");
    train_cmd->add_flag("--validate", run_validation,
                        "Pick an LLM smoothing radius on the validation partition");

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "Run a trained model over a partition");
    detect_cmd->set_config("--config");
    std::string detect_model, detect_manifest, detect_out;
    std::string detect_partition = "test", method = "llm";
    ExtractionParams extract_params;
    detect_cmd->add_option("--model", detect_model, "Model file")->required();
    detect_cmd->add_option("--data", detect_manifest, "Dataset manifest")->required();
    detect_cmd->add_option("--out", detect_out, "Detections file to write")->required();
    detect_cmd->add_option("--partition", detect_partition, "Partition to detect on");
    detect_cmd->add_option("--method", method, "Extraction method: llm|kde");
    detect_cmd->add_option("--smoothing-radius", extract_params.smoothing_radius,
                           "LLM pre-smoothing radius");
    detect_cmd->add_option("--kde-radius", extract_params.kde_radius, "KDE kernel radius");
    detect_cmd->add_option("--threshold", extract_params.threshold, "Operating threshold");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score a detections file (average precision)");
    eval_cmd->set_config("--config");
    CommonEvalArgs eval_args;
    add_eval_options(eval_cmd, eval_args);

    // roc
    auto* roc_cmd = app.add_subcommand("roc", "Write a truncated ROC curve for a detections file");
    roc_cmd->set_config("--config");
    CommonEvalArgs roc_args;
    std::string roc_out;
    double truncation = 2.0;
    add_eval_options(roc_cmd, roc_args);
    roc_cmd->add_option("--out", roc_out, "Curve file to write")->required();
    roc_cmd->add_option("--truncation", truncation, "False positive rate bound");

    CLI11_PARSE(app, argc, argv);

    if (synth_cmd->parsed()) {
        const fs::path manifest = synth_to_directory(synth_cfg, synth_out);
        std::cout << "wrote " << manifest.string() << "\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        train_cfg.grammar = grammar == "haar" ? FeatureGrammar::HaarOnly : FeatureGrammar::Rich;
        train_cfg.kernel_shape = kernel_shape_from_name(kernel_shape);
        train_cfg.mode = evidence_mode_from_name(mode);
        train_cfg.loss_mode = loss == "smooth" ? LossMode::Smooth : LossMode::Hinge;
        if (*discount_opt) train_cfg.discount_override = discount;

        const Dataset dataset = load_dataset(train_manifest);
        const auto train_images = dataset.partition(Partition::Train);
        std::ofstream log_file;
        if (!log_path.empty()) {
            log_file.open(log_path);
            if (!log_file) throw std::runtime_error("cannot write log: " + log_path);
        }
        // Progress stream goes to stdout; --log mirrors it to a file.
        struct Tee : std::streambuf {
            std::streambuf* a;
            std::streambuf* b;
            int overflow(int c) override {
                if (c != EOF) {
                    a->sputc(static_cast<char>(c));
                    if (b) b->sputc(static_cast<char>(c));
                }
                return c;
            }
        } tee;
        tee.a = std::cout.rdbuf();
        tee.b = log_file.is_open() ? log_file.rdbuf() : nullptr;
        std::ostream log_stream(&tee);

        const Ensemble ensemble = train(train_images, train_cfg, &log_stream);
        save_model(ensemble.members, model_out);
        std::cout << "model: " << model_out << " (" << ensemble.members.size() << " members)\n";

        if (run_validation) {
            const auto val_images = dataset.partition(Partition::Validation);
            ValidationGrid grid;
            grid.method = ExtractionMethod::Llm;
            grid.radii = {0, 1, 2, 3, 4};
            const ExtractionParams chosen = validate(ensemble.members, val_images, grid);
            std::cout << "validation: method=llm smoothing-radius=" << chosen.smoothing_radius
                      << "\n";
        }
        return 0;
    }

    if (detect_cmd->parsed()) {
        extract_params.method = extraction_method_from_name(method);
        const std::vector<HosHypothesis> members = load_model(detect_model);
        const Dataset dataset = load_dataset(detect_manifest);
        const auto images = dataset.partition(partition_from_name(detect_partition));
        std::vector<ImageDetections> all;
        for (const LabeledImage* image : images) {
            const ObjectnessField field = compute_objectness(members, image->image);
            all.push_back({image->id, detect(field, extract_params)});
        }
        write_detections(all, detect_out);
        std::cout << "wrote " << detect_out << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        const std::vector<EvalImage> images = load_eval_set(eval_args);
        std::size_t objects = 0, detections = 0;
        for (const EvalImage& e : images) {
            objects += e.truth.size();
            detections += e.detections.size();
        }
        const double ap = average_precision(images, eval_args.delta);
        std::cout << "images " << images.size() << " objects " << objects << " detections "
                  << detections << "\n";
        std::cout << "AP " << format_double(ap) << "\n";
        return 0;
    }

    if (roc_cmd->parsed()) {
        const std::vector<EvalImage> images = load_eval_set(roc_args);
        const RocCurve curve = roc(images, roc_args.delta, truncation);
        const double ap = average_precision(images, roc_args.delta);
        write_roc(curve, roc_args.delta, roc_out);
        std::cout << "AROC " << format_double(curve.area) << "\n";
        std::cout << "AP " << format_double(ap) << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
