// Acceptance suite: one self-contained check per release criterion, one
// pass/fail line each, nonzero exit if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "locboost/boost.hpp"
#include "locboost/eval.hpp"
#include "locboost/model_io.hpp"
#include "locboost/sweep.hpp"
#include "oracles.hpp"

using namespace locboost;
using namespace locboost::test;

namespace {

int failures = 0;
int checks = 0;

struct Criterion {
    int number;
    std::string title;
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& message) {
        ++checks;
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

void report(const Criterion& c) {
    if (!c.ok) ++failures;
    std::printf("%s criterion %2d: %s%s%s\n", c.ok ? "PASS" : "FAIL", c.number,
                c.title.c_str(), c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Dataset acceptance_dataset(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.train_images = 10;
    cfg.validation_images = 10;
    cfg.test_images = 10;
    cfg.width = 64;
    cfg.height = 64;
    cfg.min_objects = 5;
    cfg.max_objects = 5;
    cfg.seed = seed;
    return synth(cfg);
}

// --- criteria -------------------------------------------------------------

// 1: closed-form shift optimizer vs a 1e-4 grid over [0, 6], 200 instances.
void criterion_1() {
    Criterion c{1, "shift optimizer matches the grid oracle"};
    const auto start = std::chrono::steady_clock::now();
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const LossPartition p = random_zero_partition(rng, 20, 50);
        const double b = pick_discount(rng);
        const ShiftResult r = optimize_shift(p, b);
        const GridMinimum grid = grid_shift_loss(p, b, 6.0, 1e-4);
        if (!close_abs(r.loss, grid.loss, 1e-6)) {
            c.expect(false, "trial " + std::to_string(trial) + ": closed-form " +
                                fmt(r.loss) + " vs grid " + fmt(grid.loss));
            break;
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(seconds < 5.0, "took " + fmt(seconds) + "s (budget 5s)");
    report(c);
}

// 2: flat-kernel alpha optimizers agree with each other (1e-9) and with the
// grid oracle (1e-6).
void criterion_2() {
    Criterion c{2, "flat alpha optimizers agree with each other and the oracle"};
    Rng rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const LossPartition p = random_positive_partition(rng, /*flat=*/true, 20, 50);
        const double b = pick_discount(rng);
        const AlphaResult exact = optimize_alpha_flat(p, b, 10.0);
        const AlphaResult over = optimize_alpha(p, b, 10.0);
        if (!close_abs(exact.loss, over.loss, 1e-9 * std::max(1.0, exact.loss)) ||
            !close_abs(exact.alpha, over.alpha, 1e-9 * std::max(1.0, exact.alpha))) {
            c.expect(false, "trial " + std::to_string(trial) + ": routes disagree");
            break;
        }
        const GridMinimum grid = grid_alpha_loss_flat(p, b, 10.0, 1e-4);
        if (!close_abs(exact.loss, grid.loss, 1e-6)) {
            c.expect(false, "trial " + std::to_string(trial) + ": exact " + fmt(exact.loss) +
                                " vs grid " + fmt(grid.loss));
            break;
        }
    }
    report(c);
}

// 3: the linearized overestimate dominates the true alpha loss and is tight
// at alpha = 0.
void criterion_3() {
    Criterion c{3, "alpha overestimate is sound"};
    Rng rng(303);
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        const LossPartition p = random_positive_partition(rng, /*flat=*/false, 20, 50);
        const double b = pick_discount(rng);
        for (int i = 0; i <= 100; ++i) {
            const double alpha = 10.0 * i / 100.0;
            const double over = direct_alpha_overestimate(p, b, alpha);
            const double exact = direct_alpha_loss(p, b, alpha);
            if (over < exact - 1e-9 * std::max(1.0, exact)) {
                c.expect(false, "dominance broken at alpha " + fmt(alpha));
                break;
            }
        }
        const double at_zero_gap =
            std::abs(direct_alpha_overestimate(p, b, 0.0) - direct_alpha_loss(p, b, 0.0));
        if (at_zero_gap > 1e-12) {
            c.expect(false, "gap at alpha=0 is " + fmt(at_zero_gap));
        }
    }
    report(c);
}

// 4: no false negatives => zero shift loss at s = max{0, max over bg0 of H}.
void criterion_4() {
    Criterion c{4, "zero shift loss whenever fg0 is empty"};
    Rng rng(404);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        LossPartition p;
        const int nbg = rng.next_int(0, 50);
        double expected = 0.0;
        for (int i = 0; i < nbg; ++i) {
            const double h = rng.next_real(-3.0, 3.0);
            p.bg_zero_h.push_back(h);
            expected = std::max(expected, h);
        }
        p.refresh_v();
        const ShiftResult r = optimize_shift(p, pick_discount(rng));
        if (r.loss != 0.0) c.expect(false, "loss not exactly zero");
        if (r.shift != expected) c.expect(false, "shift is not max{0, max H}");
    }
    report(c);
}

// 5: incremental sweep vs scratch rebuilds on a 32x32 synthetic image,
// 50 random candidates, every per-theta triple within 1e-9.
void criterion_5() {
    Criterion c{5, "incremental sweep equals scratch rebuilds"};
    SynthConfig synth_cfg;
    synth_cfg.train_images = 1;
    synth_cfg.validation_images = 0;
    synth_cfg.test_images = 0;
    synth_cfg.width = 32;
    synth_cfg.height = 32;
    synth_cfg.min_objects = 3;
    synth_cfg.max_objects = 3;
    synth_cfg.seed = 505;
    const Dataset data = synth(synth_cfg);
    const LabeledImage& item = data.items[0];

    const TrainingMask mask =
        make_training_mask(item.image.width(), item.image.height(), item.centers, 4.0);
    Rng rng(506);
    ObjectnessField field(item.image.width(), item.image.height());
    for (double& v : field.values.cells()) v = rng.next_real(-1.5, 1.5);

    const IntegralImage integral(item.image);
    FeatureSampler sampler(507, FeatureGrammar::Rich);

    for (int candidate = 0; candidate < 50 && c.ok; ++candidate) {
        SweepOptions options;
        options.kernel = candidate % 2 == 0
                             ? CorrelationKernel(KernelShape::FlatDisk, 4.0)
                             : CorrelationKernel(KernelShape::QuadraticFalloff, 3.0);
        options.mode = candidate % 4 < 2 ? EvidenceMode::Capped : EvidenceMode::Unique;
        options.discount = mask.discount;

        const auto detections = to_detector(response_map(sampler.sample(), integral));
        std::vector<SweepStep> trace;
        sweep_thresholds(detections, field, mask, options, &trace);

        for (const SweepStep& step : trace) {
            const auto filtered = filter_at_threshold(detections, step.theta);
            const EvidenceField f = evidence_field(field.width(), field.height(), filtered,
                                                   options.kernel, options.mode);
            const LossPartition p = build_partition(field, f, mask);
            const ShiftResult s = optimize_shift(p, options.discount);
            const AlphaResult a = optimize_alpha(p, options.discount, options.alpha_max);
            if (!close(step.shift, s.shift, 1e-9) || !close(step.shift_loss, s.loss, 1e-9) ||
                !close(step.alpha, a.alpha, 1e-9) || !close(step.alpha_loss, a.loss, 1e-9) ||
                !close(step.bound, s.loss + a.loss, 1e-9)) {
                c.expect(false, "candidate " + std::to_string(candidate) + " at theta " +
                                    fmt(step.theta));
                break;
            }
        }
    }
    report(c);
}

// 6: 50 boosting iterations on the seeded synthetic set; the logged loss is
// positive and strictly decreasing until early termination.
void criterion_6(const Ensemble& hinge_run) {
    Criterion c{6, "training loss is positive and strictly decreasing"};
    c.expect(!hinge_run.trace.empty(), "training produced no iterations");
    double previous = std::numeric_limits<double>::infinity();
    for (const IterationRecord& r : hinge_run.trace) {
        if (!(r.total > 0.0)) {
            c.expect(false, "iteration " + std::to_string(r.iteration) + " non-positive");
            break;
        }
        if (!(r.total < previous)) {
            c.expect(false, "iteration " + std::to_string(r.iteration) + " did not decrease");
            break;
        }
        previous = r.total;
    }
    report(c);
}

// 7: the exact shift + true alpha loss predicted for the selected member
// matches the loss recomputed from the accumulated fields (first 10
// iterations, 1e-6 relative).
void criterion_7(const Ensemble& hinge_run) {
    Criterion c{7, "predicted exact loss matches the recomputed loss"};
    const std::size_t count = std::min<std::size_t>(10, hinge_run.trace.size());
    c.expect(count > 0, "no iterations to check");
    for (std::size_t i = 0; i < count; ++i) {
        const IterationRecord& r = hinge_run.trace[i];
        if (!close(r.total, r.predicted_total, 1e-6)) {
            c.expect(false, "iteration " + std::to_string(r.iteration) + ": recomputed " +
                                fmt(r.total) + " vs predicted " + fmt(r.predicted_total));
            break;
        }
    }
    report(c);
}

// 8: end-to-end on held-out data: detection rate >= 0.9 at fpr <= 1.0 under
// the delta = 10 nearest-neighbor metric.
void criterion_8() {
    Criterion c{8, "end-to-end synthetic detection quality"};
    const Dataset data = acceptance_dataset(801);

    TrainConfig cfg;
    cfg.iterations = 30;
    cfg.candidates_per_iteration = 50;
    cfg.seed = 802;
    const Ensemble ensemble = train(data.partition(Partition::Train), cfg);
    c.expect(!ensemble.members.empty(), "training produced no members");

    ValidationGrid grid;
    grid.radii = {0.0, 1.0, 2.0, 3.0};
    grid.delta = 10.0;
    const ExtractionParams params =
        validate(ensemble.members, data.partition(Partition::Validation), grid);

    std::vector<EvalImage> eval_images;
    for (const LabeledImage* image : data.partition(Partition::Test)) {
        const ObjectnessField field = compute_objectness(ensemble.members, image->image);
        EvalImage e;
        e.detections = detect_llm(field, params.smoothing_radius, 0.0);
        e.truth = image->centers;
        eval_images.push_back(std::move(e));
    }
    const RocCurve curve = roc(eval_images, 10.0, 2.0);
    double best_rate = 0.0;
    for (const RocPoint& p : curve.points) {
        if (p.false_positive_rate <= 1.0) best_rate = std::max(best_rate, p.detection_rate);
    }
    c.expect(best_rate >= 0.9, "detection rate at fpr<=1.0 is " + fmt(best_rate));
    report(c);
}

// 9: both loss modes run the criterion-6 protocol; hinge background loss
// stays at or below the smooth background term per iteration.
void criterion_9(const Ensemble& hinge_run, const Ensemble& smooth_run) {
    Criterion c{9, "smooth-vs-hinge ablation bound"};
    c.expect(!hinge_run.trace.empty() && !smooth_run.trace.empty(), "a mode failed to train");

    auto strictly_decreasing = [](const Ensemble& e) {
        double previous = std::numeric_limits<double>::infinity();
        for (const IterationRecord& r : e.trace) {
            if (!(r.total > 0.0 && r.total < previous)) return false;
            previous = r.total;
        }
        return true;
    };
    c.expect(strictly_decreasing(hinge_run), "hinge trace not strictly decreasing");
    c.expect(strictly_decreasing(smooth_run), "smooth trace not strictly decreasing");

    const std::size_t count = std::min(hinge_run.trace.size(), smooth_run.trace.size());
    for (std::size_t i = 0; i < count; ++i) {
        const double hinge_bg = hinge_run.trace[i].bg_loss;
        const double smooth_bg = smooth_run.trace[i].bg_loss;
        if (!(hinge_bg <= smooth_bg + 1e-9)) {
            c.expect(false, "iteration " + std::to_string(i + 1) + ": hinge bg " +
                                fmt(hinge_bg) + " > smooth bg " + fmt(smooth_bg));
            break;
        }
    }
    report(c);
}

// 10: hand-enumerated toy ROC/AP tables and the duplicate-detection rule.
void criterion_10() {
    Criterion c{10, "toy ROC and AP tables match the hand enumeration"};
    EvalImage image;
    image.truth = {{10, 10}, {40, 40}};
    image.detections = {
        {10, 10, 0.9}, {25, 10, 0.8}, {11, 10, 0.7}, {40, 40, 0.6}, {25, 30, 0.5},
    };
    const std::vector<EvalImage> images = {image};
    const RocCurve curve = roc(images, 10.0, 2.0);
    const double expected[5][3] = {
        {0.9, 0.0, 0.5}, {0.8, 0.5, 0.5}, {0.7, 1.0, 0.5}, {0.6, 1.0, 1.0}, {0.5, 1.5, 1.0},
    };
    c.expect(curve.points.size() == 5, "expected 5 thresholds");
    for (int i = 0; i < 5 && c.ok; ++i) {
        const RocPoint& p = curve.points[i];
        if (p.threshold != expected[i][0] || p.false_positive_rate != expected[i][1] ||
            p.detection_rate != expected[i][2]) {
            c.expect(false, "row " + std::to_string(i) + " differs");
        }
    }
    c.expect(curve.area == 0.75, "AROC is " + fmt(curve.area));
    c.expect(average_precision(images, 10.0) == 0.75,
             "AP is " + fmt(average_precision(images, 10.0)));

    // Two detections on one object: 1 TP + 1 FP.
    const std::vector<ScoredLocation> duplicates = {{10, 10, 1.0}, {12, 10, 0.9}};
    const std::vector<Location> one = {{10, 10}};
    const MatchResult m = match(duplicates, one, 10.0);
    c.expect(m.true_positives == 1 && m.false_positives == 1,
             "duplicate rule gave " + std::to_string(m.true_positives) + " TP, " +
                 std::to_string(m.false_positives) + " FP");
    report(c);
}

// 11: identical seed and data produce byte-identical model and detection
// files.
void criterion_11() {
    Criterion c{11, "seeded training and detection are byte-identical"};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "locboost-acceptance-determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const Dataset data = acceptance_dataset(1101);
    auto run = [&](const fs::path& model_path, const fs::path& det_path) {
        TrainConfig cfg;
        cfg.iterations = 8;
        cfg.candidates_per_iteration = 15;
        cfg.seed = 1102;
        const Ensemble ensemble = train(data.partition(Partition::Train), cfg);
        save_model(ensemble.members, model_path);
        std::vector<ImageDetections> detections;
        for (const LabeledImage* image : data.partition(Partition::Test)) {
            const ObjectnessField field = compute_objectness(ensemble.members, image->image);
            detections.push_back({image->id, detect_llm(field, 1, 0.0)});
        }
        write_detections(detections, det_path);
    };
    run(dir / "model_a.txt", dir / "det_a.txt");
    run(dir / "model_b.txt", dir / "det_b.txt");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>()};
    };
    const std::string model_a = slurp(dir / "model_a.txt");
    c.expect(!model_a.empty() && model_a == slurp(dir / "model_b.txt"),
             "model files differ");
    c.expect(slurp(dir / "det_a.txt") == slurp(dir / "det_b.txt"), "detection files differ");
    fs::remove_all(dir);
    report(c);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();

    // Criteria 6, 7, and 9 share the 50-iteration protocol on the seeded set.
    const Dataset protocol_data = acceptance_dataset(601);
    TrainConfig protocol;
    protocol.iterations = 50;
    protocol.candidates_per_iteration = 50;
    protocol.seed = 602;
    const Ensemble hinge_run = train(protocol_data.partition(Partition::Train), protocol);
    TrainConfig smooth_cfg = protocol;
    smooth_cfg.loss_mode = LossMode::Smooth;
    const Ensemble smooth_run = train(protocol_data.partition(Partition::Train), smooth_cfg);

    criterion_6(hinge_run);
    criterion_7(hinge_run);
    criterion_8();
    criterion_9(hinge_run, smooth_run);
    criterion_10();
    criterion_11();

    std::printf("%d criteria failed (%d checks)\n", failures, checks);
    return failures == 0 ? 0 : 1;
}
