#include "cqsr/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

namespace cqsr::datapipe {

std::vector<Vec2> coord_grid(int h, int w) {
    require(h >= 1 && w >= 1, "coord_grid: h, w must be >= 1");
    std::vector<Vec2> grid;
    grid.reserve(static_cast<size_t>(h) * w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) grid.push_back(cell_center(i, j, h, w));
    return grid;
}

namespace {

// Keys cubic convolution kernel, a = -0.5
double keys(double x) {
    x = std::abs(x);
    if (x < 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
    if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

struct Taps {
    int idx[4];
    double wgt[4];
};

// center-aligned source taps for one output index, edges clamped
Taps make_taps(int out_i, int in_n, int out_n) {
    const double src = (out_i + 0.5) * static_cast<double>(in_n) / out_n - 0.5;
    const int base = static_cast<int>(std::floor(src)) - 1;
    Taps t;
    for (int k = 0; k < 4; ++k) {
        t.idx[k] = std::clamp(base + k, 0, in_n - 1);
        t.wgt[k] = keys(src - (base + k));
    }
    return t;
}

}  // namespace

Image bicubic_resize(const Image& img, int out_h, int out_w) {
    require(out_h > 0 && out_w > 0, "bicubic_resize: non-positive target size");
    require(img.h > 0 && img.w > 0, "bicubic_resize: empty source");

    std::vector<Taps> col_taps(out_w);
    for (int x = 0; x < out_w; ++x) col_taps[x] = make_taps(x, img.w, out_w);

    // horizontal pass
    Image tmp(img.h, out_w);
    for (int y = 0; y < img.h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const Taps& t = col_taps[x];
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += t.wgt[k] * img.at(y, t.idx[k], c);
                tmp.at(y, x, c) = acc;
            }
        }
    }
    // vertical pass
    Image out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const Taps t = make_taps(y, img.h, out_h);
        for (int x = 0; x < out_w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += t.wgt[k] * tmp.at(t.idx[k], x, c);
                out.at(y, x, c) = std::clamp(acc, 0.0, 1.0);
            }
        }
    }
    return out;
}

std::pair<double, double> sample_scale_pair(Rng& rng) {
    std::uniform_real_distribution<double> u(1.0, 4.0);
    const double s_y = u(rng);
    const double s_x = u(rng);
    return {s_y, s_x};
}

std::pair<PatchPair, std::vector<QuerySample>> make_training_sample(const Image& hr_image, Rng& rng,
                                                                    int n_queries) {
    require(n_queries >= 1, "make_training_sample: n_queries must be >= 1");
    for (int attempt = 0;; ++attempt) {
        auto [s_y, s_x] = sample_scale_pair(rng);
        const int ph = std::max(kLRPatch, static_cast<int>(std::lround(kLRPatch * s_y)));
        const int pw = std::max(kLRPatch, static_cast<int>(std::lround(kLRPatch * s_x)));
        if (ph > hr_image.h || pw > hr_image.w) {
            if (attempt >= 8)
                throw std::invalid_argument("make_training_sample: image too small for drawn scales");
            continue;
        }
        std::uniform_int_distribution<int> dy(0, hr_image.h - ph);
        std::uniform_int_distribution<int> dx(0, hr_image.w - pw);
        const int y0 = dy(rng), x0 = dx(rng);

        PatchPair pair;
        pair.s_y = s_y;
        pair.s_x = s_x;
        pair.hr = Image(ph, pw);
        for (int y = 0; y < ph; ++y)
            for (int x = 0; x < pw; ++x)
                for (int c = 0; c < 3; ++c) pair.hr.at(y, x, c) = hr_image.at(y0 + y, x0 + x, c);
        pair.lr = bicubic_resize(pair.hr, kLRPatch, kLRPatch);

        // distinct query pixels via partial Fisher-Yates over HR pixel indices
        const size_t n_px = static_cast<size_t>(ph) * pw;
        require(static_cast<size_t>(n_queries) <= n_px, "make_training_sample: more queries than HR pixels");
        std::vector<uint32_t> perm(n_px);
        std::iota(perm.begin(), perm.end(), 0u);
        std::vector<QuerySample> queries(n_queries);
        for (int q = 0; q < n_queries; ++q) {
            std::uniform_int_distribution<size_t> pick(q, n_px - 1);
            std::swap(perm[q], perm[pick(rng)]);
            const int i = static_cast<int>(perm[q] / pw);
            const int j = static_cast<int>(perm[q] % pw);
            queries[q].coord = cell_center(i, j, ph, pw);
            queries[q].target_rgb = pair.hr.pixel(i, j);
        }
        return {std::move(pair), std::move(queries)};
    }
}

ImageDataset::ImageDataset(const std::filesystem::path& dir) {
    require(std::filesystem::is_directory(dir), "ImageDataset: not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
        // readability probe: PNG signature
        std::ifstream f(entry.path(), std::ios::binary);
        unsigned char sig[8] = {};
        f.read(reinterpret_cast<char*>(sig), 8);
        static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
        if (!f || !std::equal(sig, sig + 8, png_sig)) {
            std::cerr << "warning: skipping unreadable PNG " << entry.path() << "\n";
            continue;
        }
        paths_.push_back(entry.path());
    }
    std::sort(paths_.begin(), paths_.end());
    require(!paths_.empty(), "ImageDataset: no readable PNG files in " + dir.string());
    cache_.resize(paths_.size());
}

const Image& ImageDataset::get(size_t i) const {
    require(i < paths_.size(), "ImageDataset: index out of range");
    if (!cache_[i]) cache_[i] = png::read(paths_[i]);
    return *cache_[i];
}

}  // namespace cqsr::datapipe
