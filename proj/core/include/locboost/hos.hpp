#pragma once

#include <vector>

#include "locboost/features_types.hpp"
#include "locboost/kernel.hpp"
#include "locboost/raster.hpp"
#include "locboost/types.hpp"

namespace locboost {

// A weak detector wrapped in the hit-or-shift filter: it adds
// alpha * f(x) wherever the filtered detections put evidence, and
// subtracts shift everywhere else.
struct HosHypothesis {
    FeatureDescriptor feature;
    double theta = 0.0; // confidence threshold; +inf admits nothing
    double alpha = 0.0; // hit weight, >= 0
    double shift = 0.0; // downweight away from evidence, >= 0
    CorrelationKernel kernel{KernelShape::FlatDisk, 1.0};
    EvidenceMode mode = EvidenceMode::Capped;
};

// Accumulated master-hypothesis value H over one image.
struct ObjectnessField {
    ValueRaster values;
    int iterations = 0;

    ObjectnessField() = default;
    ObjectnessField(int width, int height) : values(width, height, 0.0) {}

    int width() const { return values.width(); }
    int height() const { return values.height(); }
    double at(int x, int y) const { return values.at(x, y); }
};

// Locations whose confidence is >= theta, ordered confidence-descending
// with row-major tie-break.
std::vector<Location> filter_at_threshold(std::span<const ScoredLocation> detections,
                                          double theta);

// The hit-or-shift prediction at a single location.
double hos_apply(const HosHypothesis& h, std::span<const ScoredLocation> raw,
                 const Location& x);

// Adds the hypothesis response to every pixel of the field: alpha * f on the
// sparse evidence support, -shift elsewhere. Increments the iteration count.
void accumulate(ObjectnessField& field, const HosHypothesis& h,
                std::span<const ScoredLocation> raw);

// Confidence-rated detections of the master hypothesis: strict positive
// local maxima of H, confidence = H value.
std::vector<ScoredLocation> master_detections(const ObjectnessField& field);

} // namespace locboost
