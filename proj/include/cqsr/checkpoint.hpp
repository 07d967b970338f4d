#pragma once

#include <filesystem>
#include <string>

#include "cqsr/model.hpp"

namespace cqsr::checkpoint {

inline constexpr uint32_t kFormatVersion = 1;

struct Manifest {
    uint32_t format_version = kFormatVersion;
    model::ModelDims dims;
    std::string cell_realization = "gru";
    uint64_t seed = 0;
    int epoch = 0;
    uint64_t loss_digest = 0;  // FNV-1a over the loss-history CSV bytes
    bool fixed_T = false;      // trained without random-T sampling
    double w_f = 1e-3;
};

// Binary layout: magic, little-endian JSON-manifest length + bytes, then one
// blob per named parameter group (name, shape header, float32 data).
void save(const std::filesystem::path& path, const model::ModelParams& params, const Manifest& manifest);

struct Loaded {
    model::ModelParams params;
    Manifest manifest;
};

Loaded load(const std::filesystem::path& path);

uint64_t fnv1a(const void* data, size_t n, uint64_t h = 14695981039346656037ull);

}  // namespace cqsr::checkpoint
