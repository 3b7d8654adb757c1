#pragma once

#include <cstdint>

namespace locboost {

// Integer pixel coordinate; x is the column, y the row.
struct Location {
    int x = 0;
    int y = 0;

    friend bool operator==(const Location&, const Location&) = default;
};

// Row-major order: y first, then x. Used as the tie-break everywhere a
// deterministic ordering of equal-confidence detections is required.
inline bool row_major_less(const Location& a, const Location& b) {
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

// An (x, y) location with a real-valued confidence. The unit of weak
// detector output.
struct ScoredLocation {
    int x = 0;
    int y = 0;
    double confidence = 0.0;

    Location location() const { return {x, y}; }

    friend bool operator==(const ScoredLocation&, const ScoredLocation&) = default;
};

// Confidence-descending with row-major tie-break.
inline bool confidence_order(const ScoredLocation& a, const ScoredLocation& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

inline std::int64_t squared_distance(const Location& a, const Location& b) {
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

} // namespace locboost
