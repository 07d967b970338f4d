#pragma once

#include <filesystem>

#include "cqsr/datapipe.hpp"
#include "cqsr/model.hpp"

namespace cqsr::eval {

inline constexpr double kPsnrCap = 100.0;

// BT.601 full-range luminance.
Plane rgb_to_y(const Image& image);

// PSNR on the luminance channel after cropping `border` pixels on all sides;
// identical images cap at 100 dB.
double psnr_y(const Image& sr, const Image& hr, int border);

struct SweepRecord {
    double scale_y = 1.0, scale_x = 1.0;
    int T = 0;
    int K = 1;
    double psnr_db = 0.0;
    double wall_ms = 0.0;
    int n_images = 0;
};

// Table-2-style sweep: for each (scale, T), bicubic-downscale every dataset
// image, super-resolve back, and average luminance PSNR. Records come out in
// scale-major, descending-T order.
std::vector<SweepRecord> cq_sweep(const model::ModelParams& params, const datapipe::ImageDataset& dataset,
                                  std::vector<int> T_list, const std::vector<std::pair<double, double>>& scales);

// Same protocol, but the model predicts all T_max components and keeps the
// top T by amplitude (the fixed-T truncation baseline).
std::vector<SweepRecord> baseline_truncation_eval(const model::ModelParams& params,
                                                  const datapipe::ImageDataset& dataset,
                                                  std::vector<int> T_list,
                                                  const std::vector<std::pair<double, double>>& scales);

// Budget ladder {1, 3/4, 1/2, 3/8, 3/16} of T_max, rounded, duplicates merged.
std::vector<int> default_T_list(int t_max);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records);

struct ProfileStat {
    int K = 1;
    double median_ms = 0.0;
    double iqr_ms = 0.0;
    long steps_per_call = 0;  // recurrence counter per predictor invocation
    bool reliable = true;     // false when timer resolution is too coarse
};

// Predictor-only timing at fixed T for each model (one per K); repeats must be
// >= 10, warm-up iterations excluded, single-threaded.
std::vector<ProfileStat> runtime_profile(const std::vector<const model::ModelParams*>& models, int T,
                                         int repeats, int n_cells = 256);

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileStat>& stats, int T);

}  // namespace cqsr::eval
