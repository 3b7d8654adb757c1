#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "locboost/eval.hpp"
#include "locboost/hos.hpp"

namespace locboost {

// Text model format, one record per ensemble member in ensemble order.
// Parameters round-trip bit-exactly (17 significant digits).
void save_model(std::span<const HosHypothesis> members, const std::filesystem::path& path);
std::vector<HosHypothesis> load_model(const std::filesystem::path& path);

// Detection files: `image_id x y confidence`, confidence-descending.
struct ImageDetections {
    std::string image_id;
    std::vector<ScoredLocation> detections;
};

void write_detections(std::span<const ImageDetections> detections,
                      const std::filesystem::path& path);
std::vector<ImageDetections> read_detections(const std::filesystem::path& path);

// ROC file: a header carrying delta and the truncation bound, then one
// `threshold fpr detection_rate` row per point.
void write_roc(const RocCurve& curve, double delta, const std::filesystem::path& path);

} // namespace locboost
