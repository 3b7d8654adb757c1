#pragma once

#include <optional>
#include <span>
#include <vector>

#include "locboost/hos.hpp"
#include "locboost/kernel.hpp"
#include "locboost/raster.hpp"
#include "locboost/types.hpp"

namespace locboost {

enum class PixelLabel : std::uint8_t { Object, Background, DontCare };

// Spatial training labels for one image: the annotated centers are the
// object set, a disc of radius rho around each center is excluded from the
// loss, and everything else is background. The discount balances background
// loss against foreground loss; by default it is |obj| / |bg|.
struct TrainingMask {
    Raster<PixelLabel> labels;
    std::vector<Location> centers;
    double dont_care_radius = 0.0;
    double discount = 1.0;
    std::size_t object_count = 0;
    std::size_t background_count = 0;

    int width() const { return labels.width(); }
    int height() const { return labels.height(); }
};

TrainingMask make_training_mask(int width, int height, std::span<const Location> centers,
                                double dont_care_radius,
                                std::optional<double> discount_override = std::nullopt);

// Loss on the object centers: sum of exp(-H).
double foreground_loss(const ObjectnessField& field, const TrainingMask& mask);

// Hinged loss on the background: discount * sum of max{0, exp(H) - 1}.
// Correctly predicted background contributes nothing.
double background_loss(const ObjectnessField& field, const TrainingMask& mask);

// Smooth ablation: sum exp(-H) over objects + discount * sum exp(H) over
// background, with no hinge.
double smooth_loss(const ObjectnessField& field, const TrainingMask& mask);

// One pixel of a positive partition set: the master value H and the
// candidate evidence f at that pixel.
struct PixelTerm {
    double h = 0.0;
    double f = 0.0;
};

// Four-way split of the masked pixels by candidate evidence: the positive
// sets carry cached per-pixel values, the zero sets only need H. V caches
// sum exp(-H) over fg0.
struct LossPartition {
    std::vector<PixelTerm> fg_pos;
    std::vector<PixelTerm> bg_pos;
    std::vector<double> fg_zero_h;
    std::vector<double> bg_zero_h;
    double v = 0.0;

    // Recomputes V from fg_zero_h; call after assembling a partition by hand.
    void refresh_v();
};

LossPartition build_partition(const ObjectnessField& field, const EvidenceField& evidence,
                              const TrainingMask& mask);

struct ShiftResult {
    double shift = 0.0;
    double loss = 0.0;
};

struct AlphaResult {
    double alpha = 0.0;
    double loss = 0.0; // overestimate bound, or the exact loss for the flat variant
};

// Minimizes the shift loss V e^s + b * sum max{0, e^(H - s) - 1} over s >= 0
// in closed form per segment of the sorted distinct background values.
ShiftResult optimize_shift(const LossPartition& partition, double discount);

// Minimizes the convex overestimate of the alpha loss, obtained by replacing
// exp(+-alpha f) with 1 - f + f exp(+-alpha), over [0, alpha_max]. The bound
// is tight at alpha = 0, so the returned alpha never increases the true loss.
AlphaResult optimize_alpha(const LossPartition& partition, double discount, double alpha_max);

// Exact alpha optimizer for flat kernels, where f is 0 or 1 and no
// overestimate is needed.
AlphaResult optimize_alpha_flat(const LossPartition& partition, double discount,
                                double alpha_max);

// Direct evaluations of the two loss components at given parameters; used
// to report exact (non-overestimated) losses after a candidate is selected.
double shift_loss_at(const LossPartition& partition, double discount, double shift);
double true_alpha_loss_at(const LossPartition& partition, double discount, double alpha);
double smooth_shift_loss_at(const LossPartition& partition, double discount, double shift);
double smooth_alpha_loss_at(const LossPartition& partition, double discount, double alpha);

namespace detail {

// One segment bin of a piecewise-convex walk: `key` is the breakpoint
// coordinate, `weighted` the sum of exponential terms scaled by evidence,
// `plain` the part scaled by (1 - evidence), `count` how many pixels they
// represent. The shift and flat walks leave `plain` at zero.
struct WalkBin {
    double key = 0.0;
    double weighted = 0.0;
    double plain = 0.0;
    double count = 0.0;
};

// Shared segment walks. Both the standalone optimizers and the incremental
// threshold sweep reduce their state to these bins, so the two paths agree
// to rounding.
ShiftResult shift_walk(std::span<const WalkBin> bins, double v, double discount);
AlphaResult alpha_walk(std::span<const WalkBin> cells, double a0_weighted, double a0_plain,
                       double a0_count, double fg_weighted, double fg_plain, double discount,
                       double alpha_max);
AlphaResult alpha_flat_walk(std::span<const WalkBin> bins, double a0_weighted, double a0_count,
                            double fg_sum, double discount, double alpha_max);

} // namespace detail

} // namespace locboost
