#pragma once

#include <cstdint>
#include <vector>

#include "locboost/features_types.hpp"
#include "locboost/raster.hpp"
#include "locboost/rng.hpp"
#include "locboost/types.hpp"

namespace locboost {

enum class FeatureGrammar { Rich, HaarOnly };

// Summed-area table with exact integer accumulation; rectangle sums are
// O(1) and bit-identical across platforms.
class IntegralImage {
public:
    explicit IntegralImage(const GrayImage& image);

    int width() const { return width_; }
    int height() const { return height_; }

    // Sum over [x, x+w) x [y, y+h). Caller keeps the rectangle in bounds.
    std::int64_t rect_sum(int x, int y, int w, int h) const {
        const std::size_t stride = static_cast<std::size_t>(width_) + 1;
        const auto* s = sums_.data();
        return s[(y + h) * stride + (x + w)] - s[(y + h) * stride + x] -
               s[y * stride + (x + w)] + s[y * stride + x];
    }

private:
    int width_;
    int height_;
    std::vector<std::int64_t> sums_; // (width+1) x (height+1)
};

struct FeatureSamplerConfig {
    int min_block = 2;
    int max_block = 6;
    int max_offset = 6;
    int min_scale = 1;
    int max_scale = 3;
};

// Draws random feature descriptors. A draw depends only on (seed, index),
// so candidate generation can be replayed or distributed.
class FeatureSampler {
public:
    FeatureSampler(std::uint64_t seed, FeatureGrammar grammar,
                   FeatureSamplerConfig config = {});

    FeatureDescriptor sample();
    FeatureDescriptor sample_at(std::uint64_t draw_index) const;

private:
    std::uint64_t seed_;
    FeatureGrammar grammar_;
    FeatureSamplerConfig config_;
    std::uint64_t next_index_ = 0;
};

// Feature response at every pixel. Pixels whose pattern window leaves the
// image are set to the minimum of the valid region so they yield no maxima.
ValueRaster response_map(const FeatureDescriptor& descriptor, const IntegralImage& integral);
ValueRaster response_map(const FeatureDescriptor& descriptor, const GrayImage& image);

// Converts a response map into a confidence-rated detector: strict local
// maxima with the response height as the confidence.
std::vector<ScoredLocation> to_detector(const ValueRaster& response);

} // namespace locboost
