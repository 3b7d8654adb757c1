#pragma once

#include <vector>

#include "locboost/raster.hpp"
#include "locboost/types.hpp"

namespace locboost {

// Strict local maxima of a raster over the 8-neighborhood, sorted
// confidence-descending with row-major tie-break.
//
// Plateaus (8-connected components of equal value) that are strictly
// greater than every bordering pixel are reduced to the component's integer
// centroid, rounded toward the top-left on ties. Components touching the
// image border are suppressed, so a constant raster yields nothing.
//
// With positive_only set, only maxima with value > 0 are reported.
std::vector<ScoredLocation> find_local_maxima(const ValueRaster& raster, bool positive_only);

} // namespace locboost
