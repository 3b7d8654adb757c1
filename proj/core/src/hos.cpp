#include "locboost/hos.hpp"

#include <algorithm>
#include <stdexcept>

#include "locboost/peaks.hpp"

namespace locboost {

std::vector<Location> filter_at_threshold(std::span<const ScoredLocation> detections,
                                          double theta) {
    std::vector<ScoredLocation> kept;
    kept.reserve(detections.size());
    for (const ScoredLocation& d : detections) {
        if (d.confidence >= theta) kept.push_back(d);
    }
    std::sort(kept.begin(), kept.end(), confidence_order);
    std::vector<Location> out;
    out.reserve(kept.size());
    for (const ScoredLocation& d : kept) out.push_back(d.location());
    return out;
}

double hos_apply(const HosHypothesis& h, std::span<const ScoredLocation> raw,
                 const Location& x) {
    const std::vector<Location> filtered = filter_at_threshold(raw, h.theta);
    const double f = evidence(x, filtered, h.kernel, h.mode);
    return f > 0.0 ? h.alpha * f : -h.shift;
}

void accumulate(ObjectnessField& field, const HosHypothesis& h,
                std::span<const ScoredLocation> raw) {
    const int w = field.width();
    const int hgt = field.height();
    for (const ScoredLocation& d : raw) {
        if (d.x < 0 || d.x >= w || d.y < 0 || d.y >= hgt) {
            throw std::invalid_argument("accumulate: detection outside field extent");
        }
    }
    const std::vector<Location> filtered = filter_at_threshold(raw, h.theta);
    const EvidenceField f = evidence_field(w, hgt, filtered, h.kernel, h.mode);
    auto& cells = field.values.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto it = f.values.find(i);
        if (it != f.values.end()) {
            cells[i] += h.alpha * it->second;
        } else {
            cells[i] -= h.shift;
        }
    }
    ++field.iterations;
}

std::vector<ScoredLocation> master_detections(const ObjectnessField& field) {
    return find_local_maxima(field.values, /*positive_only=*/true);
}

} // namespace locboost
