#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "locboost/eval.hpp"
#include "locboost/rng.hpp"

using namespace locboost;

namespace {

// Two objects, five detections with confidences .9 .8 .7 .6 .5:
//   .9 on object A          -> TP
//   .8 far from everything  -> FP
//   .7 on object A again    -> FP (duplicate)
//   .6 on object B          -> TP
//   .5 far from everything  -> FP
EvalImage toy_image() {
    EvalImage image;
    image.truth = {{10, 10}, {40, 40}};
    image.detections = {
        {10, 10, 0.9}, {25, 10, 0.8}, {11, 10, 0.7}, {40, 40, 0.6}, {25, 30, 0.5},
    };
    return image;
}

} // namespace

TEST_CASE("greedy matcher") {
    const std::vector<Location> truth = {{10, 10}};

    SUBCASE("exact hit") {
        const std::vector<ScoredLocation> detections = {{10, 10, 1.0}};
        const MatchResult m = match(detections, truth, 10.0);
        CHECK(m.true_positives == 1);
        CHECK(m.false_positives == 0);
        CHECK(m.object_found[0]);
    }

    SUBCASE("duplicate detections of one object") {
        const std::vector<ScoredLocation> detections = {{10, 10, 1.0}, {12, 10, 0.9}};
        const MatchResult m = match(detections, truth, 10.0);
        CHECK(m.true_positives == 1);
        CHECK(m.false_positives == 1);
        CHECK(m.is_true_positive[0]);
        CHECK(!m.is_true_positive[1]);
    }

    SUBCASE("distance exactly delta is a miss") {
        const std::vector<ScoredLocation> detections = {{15, 10, 1.0}};
        CHECK(match(detections, truth, 5.0).true_positives == 0);
        CHECK(match(detections, truth, 5.0 + 1e-9).true_positives == 1);
    }

    SUBCASE("detection claims the nearest unmatched object") {
        const std::vector<Location> pair = {{10, 10}, {16, 10}};
        const std::vector<ScoredLocation> detections = {{12, 10, 1.0}, {11, 10, 0.9}};
        const MatchResult m = match(detections, pair, 8.0);
        // First claims (10,10); second is nearer to the claimed one but must
        // take the remaining object at distance 5.
        CHECK(m.true_positives == 2);
        CHECK(m.object_found[0]);
        CHECK(m.object_found[1]);
    }
}

TEST_CASE("toy ROC table matches the hand enumeration") {
    const EvalImage image = toy_image();
    const RocCurve curve = roc(std::vector<EvalImage>{image}, 10.0, 2.0);

    REQUIRE(curve.points.size() == 5);
    const double expected[5][3] = {
        {0.9, 0.0, 0.5}, {0.8, 0.5, 0.5}, {0.7, 1.0, 0.5}, {0.6, 1.0, 1.0}, {0.5, 1.5, 1.0},
    };
    for (int i = 0; i < 5; ++i) {
        CHECK(curve.points[i].threshold == expected[i][0]);
        CHECK(curve.points[i].false_positive_rate == doctest::Approx(expected[i][1]));
        CHECK(curve.points[i].detection_rate == doctest::Approx(expected[i][2]));
    }
    // Trapezoids: .25 + .25 + 0 + .5, extension .5; area 1.5 / 2.
    CHECK(curve.area == doctest::Approx(0.75));
}

TEST_CASE("toy AP matches the hand enumeration") {
    const EvalImage image = toy_image();
    // Recall steps: 0.5 at precision 1, then 0.5 at precision 0.5.
    CHECK(average_precision(std::vector<EvalImage>{image}, 10.0) == doctest::Approx(0.75));
}

TEST_CASE("roc endpoints") {
    SUBCASE("perfect detector") {
        EvalImage image;
        image.truth = {{5, 5}, {20, 20}};
        image.detections = {{5, 5, 1.0}, {20, 20, 0.9}};
        const RocCurve curve = roc(std::vector<EvalImage>{image}, 10.0, 2.0);
        CHECK(curve.points.back().detection_rate == 1.0);
        CHECK(curve.points.back().false_positive_rate == 0.0);
        CHECK(curve.area == doctest::Approx(1.0));
        CHECK(average_precision(std::vector<EvalImage>{image}, 10.0) == doctest::Approx(1.0));
    }

    SUBCASE("empty detections") {
        EvalImage image;
        image.truth = {{5, 5}};
        const RocCurve curve = roc(std::vector<EvalImage>{image}, 10.0, 2.0);
        REQUIRE(curve.points.size() == 1);
        CHECK(curve.points[0].false_positive_rate == 0.0);
        CHECK(curve.points[0].detection_rate == 0.0);
        CHECK(curve.area == 0.0);
        CHECK(average_precision(std::vector<EvalImage>{image}, 10.0) == 0.0);
    }

    SUBCASE("all false positives") {
        EvalImage image;
        image.truth = {{5, 5}};
        image.detections = {{30, 30, 1.0}, {40, 40, 0.9}};
        CHECK(average_precision(std::vector<EvalImage>{image}, 10.0) == 0.0);
    }

    SUBCASE("no objects is an error") {
        EvalImage image;
        image.detections = {{3, 3, 1.0}};
        CHECK_THROWS_AS((roc(std::vector<EvalImage>{image}, 10.0, 2.0)), std::invalid_argument);
        CHECK_THROWS_AS((average_precision(std::vector<EvalImage>{image}, 10.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("truncation drops trailing points") {
    EvalImage image;
    image.truth = {{5, 5}};
    image.detections = {{5, 5, 1.0}, {30, 30, 0.9}, {40, 40, 0.8}, {50, 40, 0.7}};
    const RocCurve curve = roc(std::vector<EvalImage>{image}, 10.0, 2.0);
    // fpr sequence would be 0, 1, 2, 3; the last point is dropped.
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points.back().false_positive_rate == 2.0);
    for (const RocPoint& p : curve.points) CHECK(p.false_positive_rate <= 2.0);
}

TEST_CASE("monotone sweep counts") {
    Rng rng(19);
    std::vector<EvalImage> images(3);
    for (EvalImage& image : images) {
        const int objects = rng.next_int(1, 4);
        for (int i = 0; i < objects; ++i) {
            image.truth.push_back({rng.next_int(0, 60), rng.next_int(0, 60)});
        }
        const int detections = rng.next_int(0, 10);
        for (int i = 0; i < detections; ++i) {
            image.detections.push_back(
                {rng.next_int(0, 60), rng.next_int(0, 60), rng.next_real(0.0, 1.0)});
        }
    }
    const RocCurve curve = roc(images, 8.0, 10.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].false_positive_rate >=
              curve.points[i - 1].false_positive_rate);
        CHECK(curve.points[i].detection_rate >= curve.points[i - 1].detection_rate);
        CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
    }
    CHECK(curve.area >= 0.0);
    CHECK(curve.area <= 1.0);
}
