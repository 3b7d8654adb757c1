#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "locboost/types.hpp"

namespace locboost {

enum class KernelShape { FlatDisk, LinearFalloff, QuadraticFalloff };

// How evidence from several nearby detections is combined into [0, 1]:
// capped sums the kernel values and clips at 1, unique keeps the value of
// the closest detection.
enum class EvidenceMode { Capped, Unique };

// Compact-support correlation between a predicted location and a query
// location. All shapes are 1 at zero distance and 0 at distance >= radius.
class CorrelationKernel {
public:
    CorrelationKernel(KernelShape shape, double radius);

    KernelShape shape() const { return shape_; }
    double radius() const { return radius_; }

    // C(x, v) in [0, 1]; symmetric in its arguments.
    double value(const Location& x, const Location& v) const;

    // Same kernel evaluated on a precomputed squared distance.
    double value_at_squared_distance(std::int64_t dist2) const;

    // Smallest integer bound on the support: C is zero at any |dx| or |dy|
    // beyond it.
    int support_bound() const { return support_bound_; }

    friend bool operator==(const CorrelationKernel&, const CorrelationKernel&) = default;

private:
    KernelShape shape_;
    double radius_;
    double radius_sq_;
    int support_bound_;
};

// Sparse per-pixel evidence; holds exactly the pixels where the evidence is
// strictly positive so the untouched background can be skipped.
struct EvidenceField {
    int width = 0;
    int height = 0;
    // Key is the row-major pixel index.
    std::unordered_map<std::size_t, double> values;

    double at(int x, int y) const {
        auto it = values.find(static_cast<std::size_t>(y) * width + x);
        return it == values.end() ? 0.0 : it->second;
    }
};

// Evidence at x from the filtered detection list. Capped mode returns
// min{1, sum C}; unique mode returns max C. An empty list gives 0.
double evidence(const Location& x, std::span<const Location> locations,
                const CorrelationKernel& kernel, EvidenceMode mode);

// Batched evidence over the kernel support of every location. Locations
// must lie within the extent.
EvidenceField evidence_field(int width, int height, std::span<const Location> locations,
                             const CorrelationKernel& kernel, EvidenceMode mode);

const char* kernel_shape_name(KernelShape shape);
KernelShape kernel_shape_from_name(const std::string& name);
const char* evidence_mode_name(EvidenceMode mode);
EvidenceMode evidence_mode_from_name(const std::string& name);

} // namespace locboost
