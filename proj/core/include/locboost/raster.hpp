#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace locboost {

// Row-major 2D grid of values. (0,0) is the top-left pixel, x indexes
// columns and y indexes rows.
template <typename T>
class Raster {
public:
    Raster() = default;

    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height),
          cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width <= 0 || height <= 0) {
            throw std::invalid_argument("raster extent must be positive");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    bool contains(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    T& at(int x, int y) { return cells_[index(x, y)]; }
    const T& at(int x, int y) const { return cells_[index(x, y)]; }

    T& operator[](std::size_t i) { return cells_[i]; }
    const T& operator[](std::size_t i) const { return cells_[i]; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    const std::vector<T>& cells() const { return cells_; }
    std::vector<T>& cells() { return cells_; }

    bool same_extent(const Raster& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

using GrayImage = Raster<std::uint8_t>;
using ValueRaster = Raster<double>;

} // namespace locboost
