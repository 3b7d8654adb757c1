#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "locboost/loss.hpp"
#include "locboost/numeric.hpp"

namespace locboost {

enum class LossMode { Hinge, Smooth };

struct SweepOptions {
    CorrelationKernel kernel{KernelShape::FlatDisk, 5.0};
    EvidenceMode mode = EvidenceMode::Capped;
    double discount = 1.0;
    double alpha_max = 10.0;
    LossMode loss_mode = LossMode::Hinge;
    // The smooth objective has no finite shift minimizer once every object
    // carries evidence; cap it like alpha.
    double shift_max = 10.0;
};

struct SweepImageView {
    const ObjectnessField* field = nullptr;
    const TrainingMask* mask = nullptr;
};

// Optimizer outputs at one threshold of the sweep.
struct SweepStep {
    double theta = 0.0;
    double shift = 0.0;
    double shift_loss = 0.0;
    double alpha = 0.0;
    double alpha_loss = 0.0;
    double bound = 0.0;
};

struct SweepResult {
    double theta = std::numeric_limits<double>::infinity();
    double alpha = 0.0;
    double shift = 0.0;
    double bound = 0.0;
};

// Exhaustive threshold search for one candidate detector. Thresholds are
// visited from the highest confidence down; locations enter one confidence
// level at a time and the partition, V, and the optimizer states are updated
// incrementally instead of being rebuilt. Masks, fields, and the pooled
// background histogram are fixed for the lifetime of the object, so one
// instance serves every candidate of a boosting iteration.
class ThresholdSweep {
public:
    ThresholdSweep(std::vector<SweepImageView> images, SweepOptions options);

    // One detection list per image, aligned with the construction views.
    // The empty-threshold hypothesis (theta = +inf, nothing admitted) is
    // always evaluated first. If `trace` is given it receives one entry per
    // evaluated threshold.
    SweepResult run(std::span<const std::vector<ScoredLocation>> detections,
                    std::vector<SweepStep>* trace = nullptr);

    const SweepOptions& options() const { return options_; }

private:
    struct ImageContext {
        const double* h = nullptr; // dense H values
        int width = 0;
        int height = 0;
        const PixelLabel* labels = nullptr;
        std::vector<double> exp_h;
        std::vector<double> exp_neg_h;
        std::vector<std::int32_t> bin_index; // -1 outside the background
        // per-candidate evidence state
        std::vector<double> raw;
        std::vector<std::uint64_t> epoch;
    };

    struct StencilEntry {
        int dx;
        int dy;
        double c;
    };

    struct AlphaCell {
        double weighted = 0.0;
        double plain = 0.0;
        double count = 0.0;
    };

    struct PooledDetection {
        double confidence;
        int image;
        int y;
        int x;
    };

    void reset_candidate_state();
    void admit(int image, int x, int y);
    void apply_delta(ImageContext& img, std::size_t idx, PixelLabel label, double old_f,
                     double new_f);
    SweepStep evaluate(double theta);

    std::vector<SweepImageView> views_;
    SweepOptions options_;
    std::vector<ImageContext> images_;
    std::vector<StencilEntry> stencil_;

    // pooled background histogram (fixed per iteration)
    std::vector<double> bin_key_;
    std::vector<double> bin_exp_;
    std::vector<double> bin_count_;
    std::size_t first_nonneg_bin_ = 0;
    double v_all_ = 0.0;
    double w_all_ = 0.0; // smooth mode: sum exp(H) over background
    std::size_t total_objects_ = 0;
    std::size_t total_background_ = 0;

    // per-candidate state
    std::uint64_t epoch_ = 0;
    std::vector<PooledDetection> pooled_;
    std::vector<double> removed_;
    std::vector<std::size_t> touched_bins_;
    std::map<double, AlphaCell> cells_;
    CompensatedSum v_cur_;
    CompensatedSum fg_weighted_;
    CompensatedSum fg_plain_;
    CompensatedSum a0_weighted_;
    CompensatedSum a0_plain_;
    double a0_count_ = 0.0;
    std::size_t fg_pos_count_ = 0;
    std::size_t bg_pos_count_ = 0;
    CompensatedSum removed_w_;
    CompensatedSum smooth_bg_weighted_;
    CompensatedSum smooth_bg_plain_;
    std::vector<detail::WalkBin> walk_scratch_;
};

// Single-image convenience wrapper.
SweepResult sweep_thresholds(std::span<const ScoredLocation> detections,
                             const ObjectnessField& field, const TrainingMask& mask,
                             const SweepOptions& options,
                             std::vector<SweepStep>* trace = nullptr);

} // namespace locboost
