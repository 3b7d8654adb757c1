#pragma once

#include <cstdint>
#include <string>

namespace locboost {

enum class FeatureKind {
    HaarTwoRect,
    HaarThreeRect,
    HaarCheckerboard,
    BoxSmooth,
    GradientMagnitude,
};

// Fully determines one feature response map for a given image. The seed
// lineage records which sampler draw produced the descriptor so a model is
// reproducible from its file alone.
struct FeatureDescriptor {
    FeatureKind kind = FeatureKind::HaarTwoRect;
    int orientation = 0;  // 0 = blocks side by side, 1 = stacked
    int block_w = 1;      // base rectangle size, pixels
    int block_h = 1;
    int offset_x = 0;     // pattern anchor relative to the evaluated pixel
    int offset_y = 0;
    int polarity = 1;     // +1 or -1
    int scale = 1;        // gradient step, pixels
    std::uint64_t seed = 0;
    std::uint64_t draw_index = 0;

    // Extent of the full pattern in pixels.
    int pattern_width() const;
    int pattern_height() const;

    friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

} // namespace locboost
