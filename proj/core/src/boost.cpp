#include "locboost/boost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "locboost/eval.hpp"
#include "locboost/textio.hpp"

namespace locboost {

namespace {

struct TrainImageState {
    const LabeledImage* source = nullptr;
    IntegralImage integral;
    TrainingMask mask;
    ObjectnessField field;

    TrainImageState(const LabeledImage* src, double dont_care_radius)
        : source(src), integral(src->image),
          mask(make_training_mask(src->image.width(), src->image.height(), src->centers,
                                  dont_care_radius)),
          field(src->image.width(), src->image.height()) {}
};

// Relative margin for "strictly reduces the bound"; keeps the logged loss
// trace strictly decreasing in the presence of rounding.
constexpr double kImprovementMargin = 1e-12;

} // namespace

std::string feature_descriptor_token(const FeatureDescriptor& f) {
    std::ostringstream out;
    out << feature_kind_name(f.kind) << ":" << f.orientation << ":" << f.block_w << ":"
        << f.block_h << ":" << f.offset_x << ":" << f.offset_y << ":" << f.polarity << ":"
        << f.scale;
    return out.str();
}

std::string format_iteration_record(const IterationRecord& r) {
    std::ostringstream out;
    out << r.iteration << " " << feature_descriptor_token(r.feature) << " "
        << format_double(r.theta) << " " << format_double(r.alpha) << " "
        << format_double(r.shift) << " " << format_double(r.fg_loss) << " "
        << format_double(r.bg_loss) << " " << format_double(r.total);
    return out.str();
}

Ensemble train(std::span<const LabeledImage* const> images, const TrainConfig& config,
               std::ostream* log) {
    if (images.empty()) throw std::invalid_argument("train: empty training set");
    if (config.iterations < 0 || config.candidates_per_iteration < 1) {
        throw std::invalid_argument("train: bad iteration or candidate count");
    }

    std::vector<TrainImageState> state;
    state.reserve(images.size());
    std::size_t total_objects = 0;
    std::size_t total_background = 0;
    for (const LabeledImage* image : images) {
        state.emplace_back(image, config.dont_care_radius);
        total_objects += state.back().mask.object_count;
        total_background += state.back().mask.background_count;
    }
    if (total_objects == 0) {
        throw std::invalid_argument("train: no objects in the training set");
    }

    // One global discount across the pooled training set.
    double discount;
    if (config.discount_override) {
        if (!(*config.discount_override > 0.0)) {
            throw std::invalid_argument("train: discount must be positive");
        }
        discount = *config.discount_override;
    } else {
        discount = total_background == 0
                       ? 1.0
                       : static_cast<double>(total_objects) / static_cast<double>(total_background);
    }
    for (TrainImageState& s : state) s.mask.discount = discount;

    const CorrelationKernel kernel(config.kernel_shape, config.kernel_radius);
    SweepOptions sweep_options;
    sweep_options.kernel = kernel;
    sweep_options.mode = config.mode;
    sweep_options.discount = discount;
    sweep_options.alpha_max = config.alpha_max;
    sweep_options.loss_mode = config.loss_mode;

    const bool hinge = config.loss_mode == LossMode::Hinge;
    auto current_loss = [&](double* fg_out, double* bg_out) {
        double fg = 0.0;
        double bg = 0.0;
        for (const TrainImageState& s : state) {
            const double fg_i = foreground_loss(s.field, s.mask);
            fg += fg_i;
            bg += hinge ? background_loss(s.field, s.mask)
                        : smooth_loss(s.field, s.mask) - fg_i;
        }
        if (fg_out) *fg_out = fg;
        if (bg_out) *bg_out = bg;
        return fg + bg;
    };

    FeatureSampler sampler(config.seed, config.grammar, config.sampler);
    Ensemble ensemble;
    double previous_loss = current_loss(nullptr, nullptr);

    std::vector<std::vector<ScoredLocation>> detections(state.size());
    std::vector<std::vector<ScoredLocation>> best_detections(state.size());

    for (int iteration = 1; iteration <= config.iterations; ++iteration) {
        std::vector<SweepImageView> views;
        views.reserve(state.size());
        for (const TrainImageState& s : state) views.push_back({&s.field, &s.mask});
        ThresholdSweep sweep(std::move(views), sweep_options);

        SweepResult best;
        best.bound = std::numeric_limits<double>::infinity();
        FeatureDescriptor best_feature;
        for (int candidate = 0; candidate < config.candidates_per_iteration; ++candidate) {
            const FeatureDescriptor descriptor = sampler.sample();
            for (std::size_t i = 0; i < state.size(); ++i) {
                detections[i] = to_detector(response_map(descriptor, state[i].integral));
            }
            const SweepResult result = sweep.run(detections);
            if (result.bound < best.bound) {
                best = result;
                best_feature = descriptor;
                best_detections.swap(detections);
            }
        }

        if (!(best.bound < previous_loss * (1.0 - kImprovementMargin))) {
            break; // no candidate strictly reduces the bound
        }

        HosHypothesis member;
        member.feature = best_feature;
        member.theta = best.theta;
        member.alpha = best.alpha;
        member.shift = best.shift;
        member.kernel = kernel;
        member.mode = config.mode;

        // Exact loss the selected member will produce, predicted from the
        // partitions before the fields are touched.
        double predicted = 0.0;
        for (std::size_t i = 0; i < state.size(); ++i) {
            const std::vector<Location> filtered =
                filter_at_threshold(best_detections[i], member.theta);
            const EvidenceField f = evidence_field(state[i].field.width(),
                                                   state[i].field.height(), filtered, kernel,
                                                   config.mode);
            const LossPartition partition = build_partition(state[i].field, f, state[i].mask);
            if (hinge) {
                predicted += shift_loss_at(partition, discount, member.shift);
                predicted += true_alpha_loss_at(partition, discount, member.alpha);
            } else {
                predicted += smooth_shift_loss_at(partition, discount, member.shift);
                predicted += smooth_alpha_loss_at(partition, discount, member.alpha);
            }
        }

        for (std::size_t i = 0; i < state.size(); ++i) {
            accumulate(state[i].field, member, best_detections[i]);
        }

        IterationRecord record;
        record.iteration = iteration;
        record.feature = best_feature;
        record.theta = member.theta;
        record.alpha = member.alpha;
        record.shift = member.shift;
        record.total = current_loss(&record.fg_loss, &record.bg_loss);
        record.bound = best.bound;
        record.predicted_total = predicted;

        ensemble.members.push_back(member);
        ensemble.trace.push_back(record);
        previous_loss = record.total;
        if (log) (*log) << format_iteration_record(record) << "\n";
    }
    return ensemble;
}

Ensemble train(std::span<const LabeledImage> images, const TrainConfig& config,
               std::ostream* log) {
    std::vector<const LabeledImage*> pointers;
    pointers.reserve(images.size());
    for (const LabeledImage& image : images) pointers.push_back(&image);
    return train(pointers, config, log);
}

ObjectnessField compute_objectness(std::span<const HosHypothesis> members,
                                   const GrayImage& image) {
    ObjectnessField field(image.width(), image.height());
    const IntegralImage integral(image);
    for (const HosHypothesis& member : members) {
        const std::vector<ScoredLocation> raw = to_detector(response_map(member.feature, integral));
        accumulate(field, member, raw);
    }
    return field;
}

ExtractionParams validate(std::span<const HosHypothesis> members,
                          std::span<const LabeledImage* const> validation,
                          const ValidationGrid& grid) {
    if (validation.empty()) throw std::invalid_argument("validate: empty validation set");
    if (grid.radii.empty()) throw std::invalid_argument("validate: empty parameter grid");

    std::vector<ObjectnessField> fields;
    fields.reserve(validation.size());
    for (const LabeledImage* image : validation) {
        fields.push_back(compute_objectness(members, image->image));
    }

    std::vector<double> radii(grid.radii.begin(), grid.radii.end());
    std::sort(radii.begin(), radii.end());

    ExtractionParams best;
    best.method = grid.method;
    best.threshold = 0.0;
    double best_ap = -1.0;
    for (double radius : radii) {
        ExtractionParams params;
        params.method = grid.method;
        params.smoothing_radius = static_cast<int>(std::lround(radius));
        params.kde_radius = radius;
        params.threshold = 0.0;
        std::vector<EvalImage> eval_images;
        eval_images.reserve(validation.size());
        for (std::size_t i = 0; i < validation.size(); ++i) {
            eval_images.push_back({detect(fields[i], params), validation[i]->centers});
        }
        const double ap = average_precision(eval_images, grid.delta);
        if (ap > best_ap) { // strict: ties keep the smallest radius
            best_ap = ap;
            best = params;
        }
    }
    return best;
}

} // namespace locboost
