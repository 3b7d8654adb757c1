#pragma once

#include <string>
#include <vector>

#include "locboost/hos.hpp"
#include "locboost/raster.hpp"
#include "locboost/types.hpp"

namespace locboost {

enum class ExtractionMethod { Llm, Kde };

struct ExtractionParams {
    ExtractionMethod method = ExtractionMethod::Llm;
    int smoothing_radius = 0; // LLM pre-smoothing
    double kde_radius = 3.0;
    double threshold = 0.0; // operating point
};

// Normalized box filter with half-width `radius`; windows are clipped at the
// image border and divided by the clipped pixel count. Radius 0 is identity.
ValueRaster box_smooth(const ValueRaster& raster, int radius);

// Large-local-maxima detector: pre-smooths H, then keeps strict positive
// local maxima whose smoothed value reaches the threshold.
std::vector<ScoredLocation> detect_llm(const ObjectnessField& field, int smoothing_radius,
                                       double threshold);

// Kernel-density detector: an Epanechnikov density over the unsmoothed LLM
// detections, weighted by their confidences; detections are the strict
// local maxima of the density.
std::vector<ScoredLocation> detect_kde(const ObjectnessField& field, double kde_radius,
                                       double threshold);

std::vector<ScoredLocation> detect(const ObjectnessField& field, const ExtractionParams& params);

const char* extraction_method_name(ExtractionMethod method);
ExtractionMethod extraction_method_from_name(const std::string& name);

} // namespace locboost
