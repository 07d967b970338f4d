#include "cqsr/corpus.hpp"

#include <cmath>
#include <random>
#include <vector>
#include <numbers>

#include "cqsr/datapipe.hpp"

namespace cqsr::corpus {

namespace {
constexpr double pi = std::numbers::pi;

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

struct Sine {
    double fx, fy, ph, a;
};

const std::vector<Sine>& banding() {
    static const std::vector<Sine> sines = [] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> freq(8.0, 32.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
        std::uniform_real_distribution<double> dir(0.0, 2.0 * pi);
        std::vector<Sine> out;
        for (int i = 0; i < 30; ++i) {
            const double f = freq(rng), th = dir(rng);
            const double amp = 0.03 * (0.5 + 0.5 * (i % 3) / 2.0);
            out.push_back({f * std::cos(th), f * std::sin(th), phase(rng), amp});
        }
        return out;
    }();
    return sines;
}
}  // namespace

Image edges_image(int h, int w) {
    Image img(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
            // one dominant stripe direction, softened so bicubic LR stays faithful
            const double s = std::sin(2.0 * pi * (6.0 * u + 3.0 * v));
            const double edge = smoothstep(0.5 + 1.8 * s);
            const double band = smoothstep(0.5 + 2.0 * std::sin(2.0 * pi * (1.5 * u + 0.75 * v)));
            const double base = 0.25 + 0.5 * edge;
            img.at(y, x, 0) = std::clamp(base * (0.7 + 0.3 * band), 0.0, 1.0);
            img.at(y, x, 1) = std::clamp(base, 0.0, 1.0);
            img.at(y, x, 2) = std::clamp(base * (1.0 - 0.25 * band), 0.0, 1.0);
        }
    }
    return img;
}

Image texture_image(int h, int w) {
    Image img(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
            double t = 0.5;
            t += 0.16 * std::sin(2.0 * pi * (5.0 * u + 2.0 * v));
            t += 0.12 * std::sin(2.0 * pi * (3.0 * v - 1.0 * u) + 1.3);
            t += 0.08 * std::sin(2.0 * pi * (7.0 * u * v + 2.0 * u) + 0.7);
            t += 0.06 * std::sin(2.0 * pi * (4.5 * (u + v)));
            img.at(y, x, 0) = std::clamp(t + 0.05 * std::sin(2.0 * pi * 2.0 * u), 0.0, 1.0);
            img.at(y, x, 1) = std::clamp(t, 0.0, 1.0);
            img.at(y, x, 2) = std::clamp(t - 0.05 * std::sin(2.0 * pi * 2.0 * v), 0.0, 1.0);
        }
    }
    return img;
}

Image gradient_image(int h, int w) {
    Image img(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
            const double r = std::hypot(u - 0.35, v - 0.4);
            const double glow = std::exp(-4.0 * r * r);
            const double sky = 0.38 + 0.22 * v + 0.08 * std::sin(2.0 * pi * 0.5 * u);
            // dense multi-frequency banding (8-32 cycles, many directions)
            // spreads spectral energy across far more components than a small
            // budget can carry, so component budgets trade off visibly
            double band = 0.0;
            for (const auto& s : banding()) band += s.a * std::sin(2.0 * pi * (s.fx * u + s.fy * v) + s.ph);
            img.at(y, x, 0) = std::clamp(sky * 0.9 + 0.3 * glow + band, 0.0, 1.0);
            img.at(y, x, 1) = std::clamp(sky * 0.8 + 0.22 * glow + band, 0.0, 1.0);
            img.at(y, x, 2) = std::clamp(sky + 0.13 * glow + 0.8 * band, 0.0, 1.0);
        }
    }
    return img;
}

void write_desk_corpus(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    png::write(dir / "edges.png", edges_image());
    png::write(dir / "gradient.png", gradient_image());
    png::write(dir / "texture.png", texture_image());
}

}  // namespace cqsr::corpus
