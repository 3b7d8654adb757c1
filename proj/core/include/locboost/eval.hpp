#pragma once

#include <span>
#include <vector>

#include "locboost/types.hpp"

namespace locboost {

// Greedy nearest-neighbor verdicts for one image's detections.
struct MatchResult {
    std::vector<bool> is_true_positive; // per detection, in input order
    std::vector<bool> object_found;     // per ground-truth object
    double delta = 0.0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
};

// Processes detections in the given (confidence-descending) order. A
// detection strictly within delta of an unmatched object claims the nearest
// unmatched one and is a true positive; everything else, including repeat
// detections of an already-claimed object, is a false positive.
MatchResult match(std::span<const ScoredLocation> detections, std::span<const Location> truth,
                  double delta);

struct RocPoint {
    double threshold = 0.0;
    double false_positive_rate = 0.0; // false positives per ground-truth object
    double detection_rate = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points; // sorted by descending threshold
    double truncation = 2.0;
    double area = 0.0; // AROC, normalized to [0, 1]
};

// Detections and ground truth for one image of an evaluation set.
struct EvalImage {
    std::vector<ScoredLocation> detections;
    std::vector<Location> truth;
};

// Pools matches across images under a global confidence sweep. Points with a
// false positive rate beyond the truncation are dropped; the area is the
// trapezoidal area under the retained curve (extended at the final detection
// rate out to the truncation bound) divided by the truncation.
RocCurve roc(std::span<const EvalImage> images, double delta, double truncation);

// Standard average precision under the same greedy matcher:
// sum over thresholds of (recall step) * precision.
double average_precision(std::span<const EvalImage> images, double delta);

} // namespace locboost
