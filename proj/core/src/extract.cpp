#include "locboost/extract.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locboost/peaks.hpp"

namespace locboost {

ValueRaster box_smooth(const ValueRaster& raster, int radius) {
    if (radius < 0) throw std::invalid_argument("smoothing radius must be non-negative");
    if (radius == 0) return raster;
    const int w = raster.width();
    const int h = raster.height();

    // Separable means: mean over clipped row windows, then column windows.
    ValueRaster rows(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            double sum = 0.0;
            for (int i = x0; i <= x1; ++i) sum += raster.at(i, y);
            rows.at(x, y) = sum / (x1 - x0 + 1);
        }
    }
    ValueRaster out(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int i = y0; i <= y1; ++i) sum += rows.at(x, i);
            out.at(x, y) = sum / (y1 - y0 + 1);
        }
    }
    return out;
}

std::vector<ScoredLocation> detect_llm(const ObjectnessField& field, int smoothing_radius,
                                       double threshold) {
    const ValueRaster smoothed = box_smooth(field.values, smoothing_radius);
    std::vector<ScoredLocation> maxima = find_local_maxima(smoothed, /*positive_only=*/true);
    std::erase_if(maxima, [&](const ScoredLocation& d) { return d.confidence < threshold; });
    return maxima;
}

std::vector<ScoredLocation> detect_kde(const ObjectnessField& field, double kde_radius,
                                       double threshold) {
    if (!(kde_radius > 0.0)) throw std::invalid_argument("kde radius must be positive");
    const std::vector<ScoredLocation> seeds = detect_llm(field, 0, 0.0);
    if (seeds.empty()) return {};
    const int w = field.width();
    const int h = field.height();
    ValueRaster density(w, h, 0.0);
    const double radius_sq = kde_radius * kde_radius;
    const int bound = static_cast<int>(std::ceil(kde_radius));
    for (const ScoredLocation& seed : seeds) {
        const int y0 = std::max(0, seed.y - bound);
        const int y1 = std::min(h - 1, seed.y + bound);
        const int x0 = std::max(0, seed.x - bound);
        const int x1 = std::min(w - 1, seed.x + bound);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const auto d2 = static_cast<double>(
                    squared_distance({x, y}, {seed.x, seed.y}));
                const double k = 1.0 - d2 / radius_sq;
                if (k > 0.0) density.at(x, y) += seed.confidence * k;
            }
        }
    }
    std::vector<ScoredLocation> maxima = find_local_maxima(density, /*positive_only=*/true);
    std::erase_if(maxima, [&](const ScoredLocation& d) { return d.confidence < threshold; });
    return maxima;
}

std::vector<ScoredLocation> detect(const ObjectnessField& field,
                                   const ExtractionParams& params) {
    if (params.method == ExtractionMethod::Llm) {
        return detect_llm(field, params.smoothing_radius, params.threshold);
    }
    return detect_kde(field, params.kde_radius, params.threshold);
}

const char* extraction_method_name(ExtractionMethod method) {
    return method == ExtractionMethod::Llm ? "llm" : "kde";
}

ExtractionMethod extraction_method_from_name(const std::string& name) {
    if (name == "llm") return ExtractionMethod::Llm;
    if (name == "kde") return ExtractionMethod::Kde;
    throw std::invalid_argument("unknown extraction method: " + name);
}

} // namespace locboost
