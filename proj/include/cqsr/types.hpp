#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqsr {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// H x W x 3 image, RGB, values nominally in [0,1] (not enforced until export).
struct Image {
    int h = 0;
    int w = 0;
    std::vector<double> data;  // row-major, interleaved RGB

    Image() = default;
    Image(int h_, int w_, double fill = 0.0) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_ * 3, fill) {
        if (h_ <= 0 || w_ <= 0) throw std::invalid_argument("Image: non-positive shape");
    }

    double& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * w + x) * 3 + c]; }
    double at(int y, int x, int c) const { return data[(static_cast<size_t>(y) * w + x) * 3 + c]; }

    Vec3 pixel(int y, int x) const { return {at(y, x, 0), at(y, x, 1), at(y, x, 2)}; }

    bool finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// Single-channel H x W grid.
struct Plane {
    int h = 0;
    int w = 0;
    std::vector<double> data;

    Plane() = default;
    Plane(int h_, int w_, double fill = 0.0) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_, fill) {
        if (h_ <= 0 || w_ <= 0) throw std::invalid_argument("Plane: non-positive shape");
    }

    double& at(int y, int x) { return data[static_cast<size_t>(y) * w + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * w + x]; }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace cqsr
