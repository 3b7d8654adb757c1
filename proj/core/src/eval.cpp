#include "locboost/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace locboost {

MatchResult match(std::span<const ScoredLocation> detections, std::span<const Location> truth,
                  double delta) {
    MatchResult result;
    result.delta = delta;
    result.is_true_positive.assign(detections.size(), false);
    result.object_found.assign(truth.size(), false);
    const double delta_sq = delta * delta;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const Location d = detections[i].location();
        std::size_t best = truth.size();
        std::int64_t best_d2 = 0;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (result.object_found[t]) continue;
            const std::int64_t d2 = squared_distance(d, truth[t]);
            if (best == truth.size() || d2 < best_d2) {
                best = t;
                best_d2 = d2;
            }
        }
        // Strictly within delta.
        if (best < truth.size() && static_cast<double>(best_d2) < delta_sq) {
            result.object_found[best] = true;
            result.is_true_positive[i] = true;
            ++result.true_positives;
        } else {
            ++result.false_positives;
        }
    }
    return result;
}

namespace {

struct Verdict {
    double confidence;
    bool is_tp;
};

// Pooled per-detection verdicts, confidence-descending, plus the total
// object count.
std::pair<std::vector<Verdict>, std::size_t> pooled_verdicts(std::span<const EvalImage> images,
                                                             double delta) {
    std::vector<Verdict> verdicts;
    std::size_t objects = 0;
    for (const EvalImage& image : images) {
        objects += image.truth.size();
        std::vector<ScoredLocation> sorted(image.detections);
        std::sort(sorted.begin(), sorted.end(), confidence_order);
        const MatchResult m = match(sorted, image.truth, delta);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            verdicts.push_back({sorted[i].confidence, static_cast<bool>(m.is_true_positive[i])});
        }
    }
    std::sort(verdicts.begin(), verdicts.end(),
              [](const Verdict& a, const Verdict& b) { return a.confidence > b.confidence; });
    return {std::move(verdicts), objects};
}

} // namespace

RocCurve roc(std::span<const EvalImage> images, double delta, double truncation) {
    auto [verdicts, objects] = pooled_verdicts(images, delta);
    if (objects == 0) throw std::invalid_argument("roc: no ground-truth objects");
    if (!(truncation > 0.0)) throw std::invalid_argument("roc: truncation must be positive");

    RocCurve curve;
    curve.truncation = truncation;
    const auto n = static_cast<double>(objects);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < verdicts.size()) {
        const double level = verdicts[i].confidence;
        while (i < verdicts.size() && verdicts[i].confidence == level) {
            if (verdicts[i].is_tp) ++tp; else ++fp;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / n;
        if (fpr > truncation) break; // points past the bound are dropped
        curve.points.push_back({level, fpr, static_cast<double>(tp) / n});
    }
    if (curve.points.empty()) {
        curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    }

    // Trapezoids between retained points, extended at the last detection
    // rate out to the truncation.
    double area = 0.0;
    double prev_fpr = 0.0;
    double prev_rate = 0.0;
    for (const RocPoint& p : curve.points) {
        area += (p.false_positive_rate - prev_fpr) * 0.5 * (p.detection_rate + prev_rate);
        prev_fpr = p.false_positive_rate;
        prev_rate = p.detection_rate;
    }
    area += (truncation - prev_fpr) * prev_rate;
    curve.area = area / truncation;
    return curve;
}

double average_precision(std::span<const EvalImage> images, double delta) {
    auto [verdicts, objects] = pooled_verdicts(images, delta);
    if (objects == 0) throw std::invalid_argument("average_precision: no ground-truth objects");
    const auto n = static_cast<double>(objects);
    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < verdicts.size()) {
        const double level = verdicts[i].confidence;
        while (i < verdicts.size() && verdicts[i].confidence == level) {
            if (verdicts[i].is_tp) ++tp; else ++fp;
            ++i;
        }
        const double recall = static_cast<double>(tp) / n;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return ap;
}

} // namespace locboost
