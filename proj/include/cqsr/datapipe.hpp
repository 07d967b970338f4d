#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include "cqsr/types.hpp"

namespace cqsr::datapipe {

using Rng = std::mt19937_64;

// HR crop with its bicubically downscaled 48x48 LR counterpart.
struct PatchPair {
    Image hr;
    Image lr;
    double s_y = 1.0;
    double s_x = 1.0;
};

// A continuous HR coordinate on a pixel center plus its ground-truth RGB.
struct QuerySample {
    Vec2 coord{0.0, 0.0};
    Vec3 target_rgb{0.0, 0.0, 0.0};
};

inline constexpr int kLRPatch = 48;
inline constexpr int kDefaultQueries = 256;

// Cell (i,j) center = (-1 + (2i+1)/h, -1 + (2j+1)/w); row-major output.
std::vector<Vec2> coord_grid(int h, int w);

inline Vec2 cell_center(int i, int j, int h, int w) {
    return {-1.0 + (2.0 * i + 1.0) / h, -1.0 + (2.0 * j + 1.0) / w};
}

// Keys bicubic (a = -0.5), clamp edge handling, center-aligned sampling grid,
// output clamped to [0,1].
Image bicubic_resize(const Image& img, int out_h, int out_w);

// Two independent uniform draws from [1,4].
std::pair<double, double> sample_scale_pair(Rng& rng);

// Random (48 s_y) x (48 s_x) HR crop, bicubic LR, and n distinct query
// coordinates on HR pixel centers. Rescales up to 8 times if the image is too
// small for the drawn scales, then rejects.
std::pair<PatchPair, std::vector<QuerySample>> make_training_sample(const Image& hr_image, Rng& rng,
                                                                    int n_queries = kDefaultQueries);

// Directory of PNGs in deterministic lexicographic order, decoded lazily.
class ImageDataset {
  public:
    explicit ImageDataset(const std::filesystem::path& dir);

    size_t size() const { return paths_.size(); }
    const Image& get(size_t i) const;
    const std::filesystem::path& path(size_t i) const { return paths_[i]; }

  private:
    std::vector<std::filesystem::path> paths_;
    mutable std::vector<std::optional<Image>> cache_;
};

}  // namespace cqsr::datapipe

namespace cqsr::png {

Image read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const Image& img);

}  // namespace cqsr::png
