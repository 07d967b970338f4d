#pragma once

#include <filesystem>

#include "cqsr/types.hpp"

namespace cqsr::corpus {

// Deterministic synthetic 256x256 images: an oriented-edge pattern, a
// sinusoidal texture, and a photo-like smooth gradient.
Image edges_image(int h = 256, int w = 256);
Image texture_image(int h = 256, int w = 256);
Image gradient_image(int h = 256, int w = 256);

// Writes edges.png, gradient.png and texture.png into `dir` (created if
// missing) so training, sweeps and the acceptance runs work offline.
void write_desk_corpus(const std::filesystem::path& dir);

}  // namespace cqsr::corpus
