#include "cqsr/panel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqsr/eval.hpp"
#include "cqsr/fourier.hpp"

namespace cqsr::panel {

namespace {

Image crop(const Image& img, const Rect& r) {
    require(r.y >= 0 && r.x >= 0 && r.h >= 2 && r.w >= 2 && r.y + r.h <= img.h && r.x + r.w <= img.w,
            "spectrum_panel: patch rectangle out of bounds");
    Image out(r.h, r.w);
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(r.y + y, r.x + x, c);
    return out;
}

Image gray_panel(const Plane& p) {
    const double lo = *std::min_element(p.data.begin(), p.data.end());
    const double hi = *std::max_element(p.data.begin(), p.data.end());
    const double span = (hi > lo) ? hi - lo : 1.0;
    Image img(p.h, p.w);
    for (int y = 0; y < p.h; ++y)
        for (int x = 0; x < p.w; ++x) {
            const double v = (p.at(y, x) - lo) / span;
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = v;
        }
    return img;
}

void blit(Image& dst, const Image& src, int y0, int x0) {
    for (int y = 0; y < src.h; ++y)
        for (int x = 0; x < src.w; ++x)
            for (int c = 0; c < 3; ++c) dst.at(y0 + y, x0 + x, c) = src.at(y, x, c);
}

Image side_by_side(const Image& img) {
    const Image spec = gray_panel(fourier::amplitude_spectrum(eval::rgb_to_y(img)));
    Image row(img.h, img.w * 2);
    blit(row, img, 0, 0);
    blit(row, spec, 0, img.w);
    return row;
}

}  // namespace

Image spectrum_panel(const Image& image, const std::optional<Rect>& patch) {
    const Image top = side_by_side(image);
    if (!patch) return top;
    const Image bottom = side_by_side(crop(image, *patch));
    Image out(top.h + bottom.h, std::max(top.w, bottom.w));
    blit(out, top, 0, 0);
    blit(out, bottom, top.h, 0);
    return out;
}

std::optional<double> spectrum_anisotropy(const Plane& raw_spectrum, int n_bins) {
    require(n_bins >= 2, "spectrum_anisotropy: need at least 2 angle bins");
    const double cy = raw_spectrum.h / 2.0, cx = raw_spectrum.w / 2.0;
    std::vector<double> energy(n_bins, 0.0);
    double total = 0.0;
    for (int y = 0; y < raw_spectrum.h; ++y) {
        for (int x = 0; x < raw_spectrum.w; ++x) {
            const double dy = y - cy, dx = x - cx;
            const double r = std::hypot(dy, dx);
            if (r < 1.5) continue;  // exclude DC neighborhood
            // fold opposite directions together: spectrum magnitude is symmetric
            double ang = std::atan2(dy, dx);
            if (ang < 0.0) ang += std::numbers::pi;
            int bin = static_cast<int>(ang / std::numbers::pi * n_bins);
            bin = std::clamp(bin, 0, n_bins - 1);
            const double e = raw_spectrum.at(y, x) * raw_spectrum.at(y, x);
            energy[bin] += e;
            total += e;
        }
    }
    if (total < 1e-12) return std::nullopt;
    const double mx = *std::max_element(energy.begin(), energy.end());
    const double mn = *std::min_element(energy.begin(), energy.end());
    if (mn <= 0.0) return mx > 0.0 ? std::optional<double>(std::numeric_limits<double>::infinity())
                                   : std::nullopt;
    return mx / mn;
}

Image scatter_plot(const std::vector<ScatterSeries>& series, int w, int h) {
    Image img(h, w, 1.0);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const int margin = 32;
    auto px = [&](double x) {
        return margin + static_cast<int>((x - xmin) / (xmax - xmin) * (w - 2 * margin));
    };
    auto py = [&](double y) {
        return h - margin - static_cast<int>((y - ymin) / (ymax - ymin) * (h - 2 * margin));
    };
    for (int x = margin; x < w - margin; ++x)
        for (int c = 0; c < 3; ++c) img.at(h - margin, x, c) = 0.0;
    for (int y = margin; y < h - margin; ++y)
        for (int c = 0; c < 3; ++c) img.at(y, margin, c) = 0.0;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            const int cx = px(s.x[i]), cy = py(s.y[i]);
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    const int y = cy + dy, x = cx + dx;
                    if (y < 0 || y >= h || x < 0 || x >= w) continue;
                    for (int c = 0; c < 3; ++c) img.at(y, x, c) = s.color[c];
                }
        }
    }
    return img;
}

}  // namespace cqsr::panel
