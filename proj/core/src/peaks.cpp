#include "locboost/peaks.hpp"

#include <algorithm>
#include <cstdint>

namespace locboost {

namespace {

// Rounds sum/count to the nearest integer, halves toward the smaller
// coordinate (top-left).
int centroid_coordinate(std::int64_t sum, std::int64_t count) {
    // round-half-down(m) == ceil(m - 1/2) == ceil((2*sum - count) / (2*count))
    const std::int64_t num = 2 * sum - count;
    const std::int64_t den = 2 * count;
    if (num >= 0) return static_cast<int>((num + den - 1) / den);
    return static_cast<int>(-((-num) / den));
}

} // namespace

std::vector<ScoredLocation> find_local_maxima(const ValueRaster& raster, bool positive_only) {
    const int w = raster.width();
    const int h = raster.height();
    std::vector<ScoredLocation> maxima;
    std::vector<std::uint8_t> visited(raster.size(), 0);
    std::vector<std::size_t> component;
    std::vector<std::size_t> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = raster.index(x, y);
            if (visited[idx]) continue;
            const double v = raster[idx];
            if (positive_only && !(v > 0.0)) continue;

            // Fast path: compare against the 8 neighbors directly.
            bool on_border = (x == 0 || y == 0 || x == w - 1 || y == h - 1);
            bool beaten = false;
            bool has_equal = false;
            if (!on_border) {
                for (int dy = -1; dy <= 1 && !beaten; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const double nv = raster.at(x + dx, y + dy);
                        if (nv > v) {
                            beaten = true;
                            break;
                        }
                        if (nv == v) has_equal = true;
                    }
                }
                if (beaten) continue;
                if (!has_equal) {
                    maxima.push_back({x, y, v});
                    continue;
                }
            }

            // Plateau (or border pixel): flood the equal-valued component.
            component.clear();
            stack.clear();
            stack.push_back(idx);
            visited[idx] = 1;
            bool touches_border = false;
            bool dominated = false;
            while (!stack.empty()) {
                const std::size_t cur = stack.back();
                stack.pop_back();
                component.push_back(cur);
                const int cx = static_cast<int>(cur % w);
                const int cy = static_cast<int>(cur / w);
                if (cx == 0 || cy == 0 || cx == w - 1 || cy == h - 1) touches_border = true;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (!raster.contains(nx, ny)) continue;
                        const std::size_t nidx = raster.index(nx, ny);
                        const double nv = raster[nidx];
                        if (nv == v) {
                            if (!visited[nidx]) {
                                visited[nidx] = 1;
                                stack.push_back(nidx);
                            }
                        } else if (nv > v) {
                            dominated = true;
                        }
                    }
                }
            }
            if (dominated || touches_border) continue;
            std::int64_t sx = 0;
            std::int64_t sy = 0;
            for (std::size_t cell : component) {
                sx += static_cast<std::int64_t>(cell % w);
                sy += static_cast<std::int64_t>(cell / w);
            }
            const auto n = static_cast<std::int64_t>(component.size());
            maxima.push_back({centroid_coordinate(sx, n), centroid_coordinate(sy, n), v});
        }
    }

    std::sort(maxima.begin(), maxima.end(), confidence_order);
    return maxima;
}

} // namespace locboost
