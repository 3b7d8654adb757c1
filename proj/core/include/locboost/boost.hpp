#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "locboost/dataset.hpp"
#include "locboost/extract.hpp"
#include "locboost/features.hpp"
#include "locboost/sweep.hpp"

namespace locboost {

struct TrainConfig {
    int iterations = 100;
    int candidates_per_iteration = 100;
    FeatureGrammar grammar = FeatureGrammar::Rich;
    KernelShape kernel_shape = KernelShape::FlatDisk;
    double kernel_radius = 5.0;
    EvidenceMode mode = EvidenceMode::Capped;
    double dont_care_radius = 7.0;
    double alpha_max = 10.0;
    std::optional<double> discount_override; // default: pooled |obj| / |bg|
    LossMode loss_mode = LossMode::Hinge;
    std::uint64_t seed = 1;
    FeatureSamplerConfig sampler;
};

// One line of the training progress stream, plus the quantities the sweep
// predicted for the selected member (the stream itself reports exact losses
// recomputed from the accumulated fields).
struct IterationRecord {
    int iteration = 0;
    FeatureDescriptor feature;
    double theta = 0.0;
    double alpha = 0.0;
    double shift = 0.0;
    double fg_loss = 0.0;
    double bg_loss = 0.0;
    double total = 0.0;
    double bound = 0.0;           // selected L^s + overestimated alpha loss
    double predicted_total = 0.0; // exact L^s + true alpha loss
};

struct Ensemble {
    std::vector<HosHypothesis> members;
    std::vector<IterationRecord> trace;
};

// Boosting driver: per iteration draws candidate features, runs the joint
// threshold sweep across all training images, accumulates the best
// candidate, and stops early once no candidate strictly reduces the bound.
Ensemble train(std::span<const LabeledImage* const> images, const TrainConfig& config,
               std::ostream* log = nullptr);
Ensemble train(std::span<const LabeledImage> images, const TrainConfig& config,
               std::ostream* log = nullptr);

// Master hypothesis of an ensemble over one image.
ObjectnessField compute_objectness(std::span<const HosHypothesis> members,
                                   const GrayImage& image);

struct ValidationGrid {
    ExtractionMethod method = ExtractionMethod::Llm;
    std::vector<double> radii;
    double delta = 10.0;
};

// Picks the extraction radius with the best average precision on the
// validation set; ties go to the smallest radius.
ExtractionParams validate(std::span<const HosHypothesis> members,
                          std::span<const LabeledImage* const> validation,
                          const ValidationGrid& grid);

// Log-line serialization of the per-iteration record.
std::string format_iteration_record(const IterationRecord& record);
std::string feature_descriptor_token(const FeatureDescriptor& descriptor);

} // namespace locboost
