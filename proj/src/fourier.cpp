#include "cqsr/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>

namespace cqsr::fourier {

namespace {

void check_finite(const Vec2& v, const char* field) {
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
        throw std::invalid_argument(std::string("non-finite value in ") + field);
}

void check_finite(const Vec3& v, const char* field) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string("non-finite value in ") + field);
}

}  // namespace

Vec3 reconstruct_rgb(const ComponentSet& set, const Vec2& offset) {
    check_finite(offset, "offset.delta");
    check_finite(set.dc, "set.dc");
    Vec3 rgb = set.dc;
    for (const FourierComponent& c : set.components) {
        check_finite(c.freq, "component.freq");
        check_finite(c.amp_cos, "component.amp_cos");
        check_finite(c.amp_sin, "component.amp_sin");
        const double phase = std::numbers::pi * (c.freq[0] * offset[0] + c.freq[1] * offset[1]);
        const double cs = std::cos(phase);
        const double sn = std::sin(phase);
        for (int ch = 0; ch < 3; ++ch) rgb[ch] += c.amp_cos[ch] * cs + c.amp_sin[ch] * sn;
    }
    return rgb;
}

std::vector<Vec3> reconstruct_batch(const ComponentSet& set, const std::vector<Vec2>& offsets) {
    std::vector<Vec3> out;
    out.reserve(offsets.size());
    for (const Vec2& d : offsets) out.push_back(reconstruct_rgb(set, d));
    return out;
}

std::vector<Vec3> reconstruct_batch(const std::vector<ComponentSet>& sets, const std::vector<Vec2>& offsets) {
    require(sets.size() == offsets.size(), "reconstruct_batch: sets/offsets length mismatch");
    std::vector<Vec3> out;
    out.reserve(offsets.size());
    for (size_t i = 0; i < offsets.size(); ++i) out.push_back(reconstruct_rgb(sets[i], offsets[i]));
    return out;
}

double component_magnitude(const FourierComponent& c) {
    double s = 0.0;
    for (int ch = 0; ch < 3; ++ch) s += c.amp_cos[ch] * c.amp_cos[ch] + c.amp_sin[ch] * c.amp_sin[ch];
    return std::sqrt(s);
}

ComponentSet truncate_top_t(const ComponentSet& set, int t) {
    require(t >= 0, "truncate_top_t: T must be >= 0");
    const int n = static_cast<int>(set.components.size());
    std::vector<int> order(set.components.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return component_magnitude(set.components[a]) > component_magnitude(set.components[b]);
    });
    ComponentSet out;
    out.dc = set.dc;
    const int keep = std::min(t, n);
    out.components.reserve(keep);
    for (int i = 0; i < keep; ++i) out.components.push_back(set.components[order[i]]);
    return out;
}

double alignment_loss(const std::vector<FrequencyGroup>& groups, bool use_abs, double eps) {
    if (groups.empty()) {
        std::cerr << "warning: alignment_loss called with no frequency groups\n";
        return 0.0;
    }
    double total = 0.0;
    size_t counted = 0;
    for (const FrequencyGroup& g : groups) {
        const int k = static_cast<int>(g.freqs.size());
        require(k >= 1, "alignment_loss: empty frequency group");
        for (const Vec2& f : g.freqs) check_finite(f, "group.freq");
        ++counted;
        if (k == 1) continue;  // no pairs, contributes 0
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            const double ni = std::max(std::hypot(g.freqs[i][0], g.freqs[i][1]), eps);
            for (int j = i + 1; j < k; ++j) {
                const double nj = std::max(std::hypot(g.freqs[j][0], g.freqs[j][1]), eps);
                double cosij = (g.freqs[i][0] * g.freqs[j][0] + g.freqs[i][1] * g.freqs[j][1]) / (ni * nj);
                if (use_abs) cosij = std::abs(cosij);
                acc += cosij;
            }
        }
        total += -2.0 / (static_cast<double>(k) * (k - 1)) * acc;
    }
    return total / static_cast<double>(counted);
}

Plane amplitude_spectrum_raw(const Plane& image) {
    require(image.h >= 2 && image.w >= 2, "amplitude_spectrum: image must be at least 2x2");
    for (double v : image.data) require(std::isfinite(v), "amplitude_spectrum: non-finite pixel");
    const int h = image.h, w = image.w;
    const double two_pi = 2.0 * std::numbers::pi;

    // Separable row-column DFT; desk-scale images keep this fast enough.
    std::vector<double> row_re(static_cast<size_t>(h) * w), row_im(static_cast<size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        for (int kx = 0; kx < w; ++kx) {
            double re = 0.0, im = 0.0;
            for (int x = 0; x < w; ++x) {
                const double ang = -two_pi * kx * x / w;
                re += image.at(y, x) * std::cos(ang);
                im += image.at(y, x) * std::sin(ang);
            }
            row_re[static_cast<size_t>(y) * w + kx] = re;
            row_im[static_cast<size_t>(y) * w + kx] = im;
        }
    }
    Plane mag(h, w);
    for (int ky = 0; ky < h; ++ky) {
        for (int kx = 0; kx < w; ++kx) {
            double re = 0.0, im = 0.0;
            for (int y = 0; y < h; ++y) {
                const double ang = -two_pi * ky * y / h;
                const double c = std::cos(ang), s = std::sin(ang);
                const double rr = row_re[static_cast<size_t>(y) * w + kx];
                const double ri = row_im[static_cast<size_t>(y) * w + kx];
                re += rr * c - ri * s;
                im += rr * s + ri * c;
            }
            // center the zero frequency
            const int cy = (ky + h / 2) % h;
            const int cx = (kx + w / 2) % w;
            mag.at(cy, cx) = std::hypot(re, im);
        }
    }
    return mag;
}

Plane amplitude_spectrum(const Plane& image) {
    Plane mag = amplitude_spectrum_raw(image);
    for (double& v : mag.data) v = std::log1p(v);
    return mag;
}

void reconstruct_rgb_backward(const ComponentSet& set, const Vec2& offset, const Vec3& d_rgb,
                              ComponentSetGrad& grad) {
    require(grad.components.size() == set.components.size(), "reconstruct_rgb_backward: grad shape mismatch");
    for (int ch = 0; ch < 3; ++ch) grad.dc[ch] += d_rgb[ch];
    const double pi = std::numbers::pi;
    for (size_t t = 0; t < set.components.size(); ++t) {
        const FourierComponent& c = set.components[t];
        ComponentGrad& g = grad.components[t];
        const double phase = pi * (c.freq[0] * offset[0] + c.freq[1] * offset[1]);
        const double cs = std::cos(phase);
        const double sn = std::sin(phase);
        double d_phase = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            g.amp_cos[ch] += d_rgb[ch] * cs;
            g.amp_sin[ch] += d_rgb[ch] * sn;
            d_phase += d_rgb[ch] * (-c.amp_cos[ch] * sn + c.amp_sin[ch] * cs);
        }
        g.freq[0] += d_phase * pi * offset[0];
        g.freq[1] += d_phase * pi * offset[1];
    }
}

void alignment_loss_backward(const std::vector<FrequencyGroup>& groups, double scale,
                             std::vector<std::vector<Vec2>>& grad_freqs, bool use_abs, double eps) {
    if (groups.empty()) return;
    require(grad_freqs.size() == groups.size(), "alignment_loss_backward: grad shape mismatch");
    const double inv_groups = 1.0 / static_cast<double>(groups.size());
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& freqs = groups[gi].freqs;
        const int k = static_cast<int>(freqs.size());
        if (k < 2) continue;
        const double pair_scale = -2.0 / (static_cast<double>(k) * (k - 1)) * inv_groups * scale;
        for (int i = 0; i < k; ++i) {
            const double ni = std::max(std::hypot(freqs[i][0], freqs[i][1]), eps);
            for (int j = i + 1; j < k; ++j) {
                const double nj = std::max(std::hypot(freqs[j][0], freqs[j][1]), eps);
                const double dot = freqs[i][0] * freqs[j][0] + freqs[i][1] * freqs[j][1];
                const double cosij = dot / (ni * nj);
                double sgn = 1.0;
                if (use_abs) sgn = (cosij >= 0.0) ? 1.0 : -1.0;
                // d cos / d f_i = f_j/(ni nj) - cos * f_i/ni^2 (when ni above eps)
                for (int a = 0; a < 2; ++a) {
                    double dfi = freqs[j][a] / (ni * nj);
                    double dfj = freqs[i][a] / (ni * nj);
                    if (ni > eps) dfi -= cosij * freqs[i][a] / (ni * ni);
                    if (nj > eps) dfj -= cosij * freqs[j][a] / (nj * nj);
                    grad_freqs[gi][i][a] += pair_scale * sgn * dfi;
                    grad_freqs[gi][j][a] += pair_scale * sgn * dfj;
                }
            }
        }
    }
}

}  // namespace cqsr::fourier
