#pragma once

#include <optional>
#include <vector>

#include "cqsr/types.hpp"

namespace cqsr::panel {

// Side-by-side image / log-spectrum panel; when `patch` is given a second row
// shows the patch and its own spectrum.
struct Rect {
    int y = 0, x = 0, h = 0, w = 0;
};

Image spectrum_panel(const Image& image, const std::optional<Rect>& patch);

// Ratio of max to min directional off-center spectral energy over angle bins.
// Returns nullopt when off-center energy is negligible (e.g. constant image).
std::optional<double> spectrum_anisotropy(const Plane& raw_spectrum, int n_bins = 12);

// Minimal scatter plot (x right, y up) with axes; for Fig.-5-style emission.
struct ScatterSeries {
    std::vector<double> x, y;
    Vec3 color{0.8, 0.2, 0.2};
};

Image scatter_plot(const std::vector<ScatterSeries>& series, int w = 560, int h = 420);

}  // namespace cqsr::panel
