#include "locboost/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locboost/peaks.hpp"

namespace locboost {

int FeatureDescriptor::pattern_width() const {
    switch (kind) {
    case FeatureKind::HaarTwoRect:
        return orientation == 0 ? 2 * block_w : block_w;
    case FeatureKind::HaarThreeRect:
        return orientation == 0 ? 3 * block_w : block_w;
    case FeatureKind::HaarCheckerboard:
        return 2 * block_w;
    case FeatureKind::BoxSmooth:
        return block_w;
    case FeatureKind::GradientMagnitude:
        return 2 * scale + 1;
    }
    return block_w;
}

int FeatureDescriptor::pattern_height() const {
    switch (kind) {
    case FeatureKind::HaarTwoRect:
        return orientation == 0 ? block_h : 2 * block_h;
    case FeatureKind::HaarThreeRect:
        return orientation == 0 ? block_h : 3 * block_h;
    case FeatureKind::HaarCheckerboard:
        return 2 * block_h;
    case FeatureKind::BoxSmooth:
        return block_h;
    case FeatureKind::GradientMagnitude:
        return 2 * scale + 1;
    }
    return block_h;
}

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::HaarTwoRect: return "two_rect";
    case FeatureKind::HaarThreeRect: return "three_rect";
    case FeatureKind::HaarCheckerboard: return "checkerboard";
    case FeatureKind::BoxSmooth: return "box_smooth";
    case FeatureKind::GradientMagnitude: return "gradient_magnitude";
    }
    return "two_rect";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "two_rect") return FeatureKind::HaarTwoRect;
    if (name == "three_rect") return FeatureKind::HaarThreeRect;
    if (name == "checkerboard") return FeatureKind::HaarCheckerboard;
    if (name == "box_smooth") return FeatureKind::BoxSmooth;
    if (name == "gradient_magnitude") return FeatureKind::GradientMagnitude;
    throw std::invalid_argument("unknown feature kind: " + name);
}

IntegralImage::IntegralImage(const GrayImage& image)
    : width_(image.width()), height_(image.height()),
      sums_((static_cast<std::size_t>(width_) + 1) * (height_ + 1), 0) {
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    for (int y = 0; y < height_; ++y) {
        std::int64_t row = 0;
        for (int x = 0; x < width_; ++x) {
            row += image.at(x, y);
            sums_[(y + 1) * stride + (x + 1)] = sums_[y * stride + (x + 1)] + row;
        }
    }
}

FeatureSampler::FeatureSampler(std::uint64_t seed, FeatureGrammar grammar,
                               FeatureSamplerConfig config)
    : seed_(seed), grammar_(grammar), config_(config) {
    if (config_.min_block < 1 || config_.max_block < config_.min_block ||
        config_.min_scale < 1 || config_.max_scale < config_.min_scale ||
        config_.max_offset < 0) {
        throw std::invalid_argument("invalid feature sampler configuration");
    }
}

FeatureDescriptor FeatureSampler::sample() { return sample_at(next_index_++); }

FeatureDescriptor FeatureSampler::sample_at(std::uint64_t draw_index) const {
    Rng rng(Rng::mix(seed_, draw_index));
    FeatureDescriptor d;
    d.seed = seed_;
    d.draw_index = draw_index;
    if (grammar_ == FeatureGrammar::HaarOnly) {
        switch (rng.next_int(0, 2)) {
        case 0: d.kind = FeatureKind::HaarTwoRect; break;
        case 1: d.kind = FeatureKind::HaarThreeRect; break;
        default: d.kind = FeatureKind::HaarCheckerboard; break;
        }
    } else {
        switch (rng.next_int(0, 4)) {
        case 0: d.kind = FeatureKind::HaarTwoRect; break;
        case 1: d.kind = FeatureKind::HaarThreeRect; break;
        case 2: d.kind = FeatureKind::HaarCheckerboard; break;
        case 3: d.kind = FeatureKind::BoxSmooth; break;
        default: d.kind = FeatureKind::GradientMagnitude; break;
        }
    }
    d.orientation = rng.next_int(0, 1);
    d.block_w = rng.next_int(config_.min_block, config_.max_block);
    d.block_h = rng.next_int(config_.min_block, config_.max_block);
    d.scale = rng.next_int(config_.min_scale, config_.max_scale);
    d.polarity = rng.next_bool() ? 1 : -1;
    if (d.kind == FeatureKind::GradientMagnitude) {
        // Magnitude is sign-free; a negative polarity would only invert it.
        d.polarity = 1;
        d.offset_x = 0;
        d.offset_y = 0;
    } else {
        // Jitter the anchor around a centered pattern.
        d.offset_x = -d.pattern_width() / 2 + rng.next_int(-config_.max_offset, config_.max_offset);
        d.offset_y = -d.pattern_height() / 2 + rng.next_int(-config_.max_offset, config_.max_offset);
    }
    return d;
}

namespace {

double evaluate_haar(const FeatureDescriptor& d, const IntegralImage& ii, int ax, int ay) {
    const int bw = d.block_w;
    const int bh = d.block_h;
    std::int64_t value = 0;
    switch (d.kind) {
    case FeatureKind::HaarTwoRect:
        if (d.orientation == 0) {
            value = ii.rect_sum(ax, ay, bw, bh) - ii.rect_sum(ax + bw, ay, bw, bh);
        } else {
            value = ii.rect_sum(ax, ay, bw, bh) - ii.rect_sum(ax, ay + bh, bw, bh);
        }
        break;
    case FeatureKind::HaarThreeRect:
        if (d.orientation == 0) {
            value = ii.rect_sum(ax, ay, bw, bh) - 2 * ii.rect_sum(ax + bw, ay, bw, bh) +
                    ii.rect_sum(ax + 2 * bw, ay, bw, bh);
        } else {
            value = ii.rect_sum(ax, ay, bw, bh) - 2 * ii.rect_sum(ax, ay + bh, bw, bh) +
                    ii.rect_sum(ax, ay + 2 * bh, bw, bh);
        }
        break;
    case FeatureKind::HaarCheckerboard:
        value = ii.rect_sum(ax, ay, bw, bh) + ii.rect_sum(ax + bw, ay + bh, bw, bh) -
                ii.rect_sum(ax + bw, ay, bw, bh) - ii.rect_sum(ax, ay + bh, bw, bh);
        break;
    default:
        break;
    }
    return static_cast<double>(d.polarity * value);
}

} // namespace

ValueRaster response_map(const FeatureDescriptor& d, const IntegralImage& ii) {
    const int w = ii.width();
    const int h = ii.height();
    const int pw = d.pattern_width();
    const int ph = d.pattern_height();

    // Valid anchor pixels: p + offset in [0, extent - pattern].
    int x0, x1, y0, y1;
    if (d.kind == FeatureKind::GradientMagnitude) {
        x0 = d.scale;
        x1 = w - d.scale;
        y0 = d.scale;
        y1 = h - d.scale;
    } else {
        x0 = std::max(0, -d.offset_x);
        x1 = std::min(w, w - pw - d.offset_x + 1);
        y0 = std::max(0, -d.offset_y);
        y1 = std::min(h, h - ph - d.offset_y + 1);
    }
    if (x0 >= x1 || y0 >= y1) {
        throw std::invalid_argument("response_map: feature window larger than image");
    }

    ValueRaster out(w, h, 0.0);
    double min_value = std::numeric_limits<double>::infinity();

    switch (d.kind) {
    case FeatureKind::BoxSmooth: {
        const double area = static_cast<double>(d.block_w) * d.block_h;
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double v =
                    d.polarity *
                    static_cast<double>(
                        ii.rect_sum(x + d.offset_x, y + d.offset_y, d.block_w, d.block_h)) /
                    area;
                out.at(x, y) = v;
                if (v < min_value) min_value = v;
            }
        }
        break;
    }
    case FeatureKind::GradientMagnitude: {
        // Central differences need the raw image; reconstruct single pixels
        // from the integral as 1x1 sums.
        const int s = d.scale;
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double gx = static_cast<double>(ii.rect_sum(x + s, y, 1, 1) -
                                                      ii.rect_sum(x - s, y, 1, 1));
                const double gy = static_cast<double>(ii.rect_sum(x, y + s, 1, 1) -
                                                      ii.rect_sum(x, y - s, 1, 1));
                const double v = std::sqrt(gx * gx + gy * gy);
                out.at(x, y) = v;
                if (v < min_value) min_value = v;
            }
        }
        break;
    }
    default:
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double v = evaluate_haar(d, ii, x + d.offset_x, y + d.offset_y);
                out.at(x, y) = v;
                if (v < min_value) min_value = v;
            }
        }
        break;
    }

    // Border margin gets the raster minimum; those pixels cannot be maxima.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x < x0 || x >= x1 || y < y0 || y >= y1) out.at(x, y) = min_value;
        }
    }
    return out;
}

ValueRaster response_map(const FeatureDescriptor& d, const GrayImage& image) {
    return response_map(d, IntegralImage(image));
}

std::vector<ScoredLocation> to_detector(const ValueRaster& response) {
    return find_local_maxima(response, /*positive_only=*/false);
}

} // namespace locboost
