#include "locboost/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace locboost {

CorrelationKernel::CorrelationKernel(KernelShape shape, double radius)
    : shape_(shape), radius_(radius), radius_sq_(radius * radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("correlation kernel radius must be positive");
    }
    support_bound_ = static_cast<int>(std::ceil(radius));
}

double CorrelationKernel::value_at_squared_distance(std::int64_t dist2) const {
    const double d2 = static_cast<double>(dist2);
    switch (shape_) {
    case KernelShape::FlatDisk:
        // Strict inequality: the disk boundary itself carries no evidence.
        return d2 < radius_sq_ ? 1.0 : 0.0;
    case KernelShape::LinearFalloff: {
        const double d = std::sqrt(d2);
        const double v = 1.0 - d / radius_;
        return v > 0.0 ? v : 0.0;
    }
    case KernelShape::QuadraticFalloff: {
        const double v = 1.0 - d2 / radius_sq_;
        return v > 0.0 ? v : 0.0;
    }
    }
    return 0.0;
}

double CorrelationKernel::value(const Location& x, const Location& v) const {
    return value_at_squared_distance(squared_distance(x, v));
}

double evidence(const Location& x, std::span<const Location> locations,
                const CorrelationKernel& kernel, EvidenceMode mode) {
    if (mode == EvidenceMode::Capped) {
        double sum = 0.0;
        for (const Location& v : locations) {
            sum += kernel.value(x, v);
        }
        return sum < 1.0 ? sum : 1.0;
    }
    double best = 0.0;
    for (const Location& v : locations) {
        const double c = kernel.value(x, v);
        if (c > best) best = c;
    }
    return best;
}

EvidenceField evidence_field(int width, int height, std::span<const Location> locations,
                             const CorrelationKernel& kernel, EvidenceMode mode) {
    EvidenceField field;
    field.width = width;
    field.height = height;
    const int bound = kernel.support_bound();
    for (const Location& v : locations) {
        if (v.x < 0 || v.x >= width || v.y < 0 || v.y >= height) {
            throw std::invalid_argument("evidence_field: location outside image extent");
        }
        const int y0 = std::max(0, v.y - bound);
        const int y1 = std::min(height - 1, v.y + bound);
        const int x0 = std::max(0, v.x - bound);
        const int x1 = std::min(width - 1, v.x + bound);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double c = kernel.value({x, y}, v);
                if (c <= 0.0) continue;
                const std::size_t idx = static_cast<std::size_t>(y) * width + x;
                if (mode == EvidenceMode::Capped) {
                    field.values[idx] += c;
                } else {
                    double& cur = field.values[idx];
                    if (c > cur) cur = c;
                }
            }
        }
    }
    if (mode == EvidenceMode::Capped) {
        for (auto& [idx, value] : field.values) {
            if (value > 1.0) value = 1.0;
        }
    }
    return field;
}

const char* kernel_shape_name(KernelShape shape) {
    switch (shape) {
    case KernelShape::FlatDisk: return "flat";
    case KernelShape::LinearFalloff: return "linear";
    case KernelShape::QuadraticFalloff: return "quadratic";
    }
    return "flat";
}

KernelShape kernel_shape_from_name(const std::string& name) {
    if (name == "flat") return KernelShape::FlatDisk;
    if (name == "linear") return KernelShape::LinearFalloff;
    if (name == "quadratic") return KernelShape::QuadraticFalloff;
    throw std::invalid_argument("unknown kernel shape: " + name);
}

const char* evidence_mode_name(EvidenceMode mode) {
    return mode == EvidenceMode::Capped ? "capped" : "unique";
}

EvidenceMode evidence_mode_from_name(const std::string& name) {
    if (name == "capped") return EvidenceMode::Capped;
    if (name == "unique") return EvidenceMode::Unique;
    throw std::invalid_argument("unknown evidence mode: " + name);
}

} // namespace locboost
