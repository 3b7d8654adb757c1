#include <doctest.h>

#include <cmath>

#include "locboost/features.hpp"
#include "locboost/rng.hpp"

using namespace locboost;

namespace {

GrayImage random_image(int w, int h, std::uint64_t seed) {
    Rng rng(seed);
    GrayImage image(w, h);
    for (auto& v : image.cells()) v = static_cast<std::uint8_t>(rng.next_int(0, 255));
    return image;
}

} // namespace

TEST_CASE("integral image rectangle sums match direct summation") {
    const GrayImage image = random_image(23, 17, 9);
    const IntegralImage ii(image);
    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const int x = rng.next_int(0, 22);
        const int y = rng.next_int(0, 16);
        const int w = rng.next_int(1, 23 - x);
        const int h = rng.next_int(1, 17 - y);
        std::int64_t direct = 0;
        for (int yy = y; yy < y + h; ++yy) {
            for (int xx = x; xx < x + w; ++xx) direct += image.at(xx, yy);
        }
        CHECK(ii.rect_sum(x, y, w, h) == direct);
    }
}

TEST_CASE("feature sampling is deterministic and bounded") {
    FeatureSampler a(42, FeatureGrammar::Rich);
    FeatureSampler b(42, FeatureGrammar::Rich);
    for (int i = 0; i < 100; ++i) CHECK(a.sample() == b.sample());

    // Same (seed, index) reproduces the draw regardless of history.
    CHECK(a.sample_at(7) == b.sample_at(7));

    FeatureSampler haar(42, FeatureGrammar::HaarOnly);
    const FeatureSamplerConfig cfg;
    for (int i = 0; i < 1000; ++i) {
        const FeatureDescriptor d = haar.sample();
        CHECK(d.kind != FeatureKind::BoxSmooth);
        CHECK(d.kind != FeatureKind::GradientMagnitude);
        CHECK(d.block_w >= cfg.min_block);
        CHECK(d.block_w <= cfg.max_block);
        CHECK(d.block_h >= cfg.min_block);
        CHECK(d.block_h <= cfg.max_block);
        CHECK(std::abs(d.offset_x + d.pattern_width() / 2) <= cfg.max_offset);
        CHECK(std::abs(d.offset_y + d.pattern_height() / 2) <= cfg.max_offset);
        CHECK((d.polarity == 1 || d.polarity == -1));
        CHECK(d.scale >= cfg.min_scale);
        CHECK(d.scale <= cfg.max_scale);
    }
}

TEST_CASE("response map on a constant image") {
    GrayImage constant(16, 16);
    for (auto& v : constant.cells()) v = 100;

    FeatureDescriptor d;
    d.kind = FeatureKind::HaarTwoRect;
    d.orientation = 0;
    d.block_w = 3;
    d.block_h = 4;
    d.offset_x = -3;
    d.offset_y = -2;

    // Rectangle sums cancel everywhere in the valid region.
    const ValueRaster response = response_map(d, constant);
    for (double v : response.cells()) CHECK(v == 0.0);
    // And a constant response has no detections.
    CHECK(to_detector(response).empty());
}

TEST_CASE("two-rect response on a step edge") {
    // 8x8 image, bright left half; a horizontal two-rect feature peaks where
    // its window straddles the edge.
    GrayImage image(8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) image.at(x, y) = x < 4 ? 200 : 10;
    }
    FeatureDescriptor d;
    d.kind = FeatureKind::HaarTwoRect;
    d.orientation = 0;
    d.block_w = 2;
    d.block_h = 2;
    d.offset_x = -2; // window [x-2, x+2) x [y-1, y+1)
    d.offset_y = -1;

    const ValueRaster response = response_map(d, image);
    // Hand evaluation at the straddle position x = 4, y = 3:
    // left block sum = 4 * 200, right block sum = 4 * 10.
    CHECK(response.at(4, 3) == doctest::Approx(4 * 200 - 4 * 10));
    // Away from the edge the blocks cancel.
    CHECK(response.at(2, 3) == 0.0);
    // The extremum along the row is at the straddle.
    for (int x = 2; x < 6; ++x) CHECK(response.at(4, 3) >= response.at(x, 3));
}

TEST_CASE("window larger than the image is rejected") {
    const GrayImage small = random_image(4, 4, 3);
    FeatureDescriptor d;
    d.kind = FeatureKind::HaarThreeRect;
    d.orientation = 0;
    d.block_w = 4; // pattern width 12 > 4
    d.block_h = 2;
    CHECK_THROWS_AS((response_map(d, small)), std::invalid_argument);
}

TEST_CASE("border margin yields no maxima") {
    const GrayImage image = random_image(20, 20, 8);
    FeatureDescriptor d;
    d.kind = FeatureKind::BoxSmooth;
    d.block_w = 5;
    d.block_h = 5;
    d.offset_x = -2;
    d.offset_y = -2;
    const ValueRaster response = response_map(d, image);
    for (const ScoredLocation& peak : to_detector(response)) {
        CHECK(peak.x >= 2);
        CHECK(peak.x < 18);
        CHECK(peak.y >= 2);
        CHECK(peak.y < 18);
    }
}

TEST_CASE("to_detector output dominates its neighborhood") {
    const GrayImage image = random_image(32, 24, 12);
    FeatureSampler sampler(5, FeatureGrammar::Rich);
    for (int trial = 0; trial < 20; ++trial) {
        const FeatureDescriptor d = sampler.sample();
        const ValueRaster response = response_map(d, image);
        const auto detections = to_detector(response);
        for (std::size_t i = 1; i < detections.size(); ++i) {
            CHECK(detections[i - 1].confidence >= detections[i].confidence);
        }
        for (const ScoredLocation& det : detections) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    CHECK(det.confidence >= response.at(det.x + dx, det.y + dy));
                }
            }
        }
    }
}

TEST_CASE("single bright pixel is a detection") {
    GrayImage image(9, 9);
    for (auto& v : image.cells()) v = 10;
    image.at(4, 4) = 250;
    FeatureDescriptor d;
    d.kind = FeatureKind::BoxSmooth;
    d.block_w = 3;
    d.block_h = 3;
    d.offset_x = -1;
    d.offset_y = -1;
    const auto detections = to_detector(response_map(d, image));
    REQUIRE(!detections.empty());
    CHECK(detections[0].x == 4);
    CHECK(detections[0].y == 4);
}

TEST_CASE("translation covariance of interior detections") {
    // Shift the image content by (3, 2); interior detections shift along.
    const int w = 40, h = 30;
    const GrayImage base = random_image(w, h, 77);
    GrayImage shifted(w, h);
    const int sx = 3, sy = 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int ox = x - sx, oy = y - sy;
            shifted.at(x, y) =
                (ox >= 0 && ox < w && oy >= 0 && oy < h) ? base.at(ox, oy) : 0;
        }
    }
    FeatureSampler sampler(9, FeatureGrammar::HaarOnly);
    const FeatureDescriptor d = sampler.sample();
    const auto base_dets = to_detector(response_map(d, base));
    const auto shifted_dets = to_detector(response_map(d, shifted));

    const int margin = 12;
    for (const ScoredLocation& det : base_dets) {
        if (det.x < margin || det.x >= w - margin || det.y < margin || det.y >= h - margin) {
            continue;
        }
        bool found = false;
        for (const ScoredLocation& s : shifted_dets) {
            if (s.x == det.x + sx && s.y == det.y + sy && s.confidence == det.confidence) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}
