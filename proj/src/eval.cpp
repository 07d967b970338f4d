#include "cqsr/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace cqsr::eval {

using Clock = std::chrono::steady_clock;

Plane rgb_to_y(const Image& image) {
    Plane y(image.h, image.w);
    for (int i = 0; i < image.h; ++i)
        for (int j = 0; j < image.w; ++j)
            y.at(i, j) = 0.299 * image.at(i, j, 0) + 0.587 * image.at(i, j, 1) + 0.114 * image.at(i, j, 2);
    return y;
}

double psnr_y(const Image& sr, const Image& hr, int border) {
    require(sr.h == hr.h && sr.w == hr.w, "psnr_y: shape mismatch");
    require(border >= 0 && border < std::min(sr.h, sr.w) / 2, "psnr_y: border too large");
    const Plane ya = rgb_to_y(sr), yb = rgb_to_y(hr);
    double mse = 0.0;
    long n = 0;
    for (int i = border; i < sr.h - border; ++i)
        for (int j = border; j < sr.w - border; ++j) {
            const double d = ya.at(i, j) - yb.at(i, j);
            mse += d * d;
            ++n;
        }
    mse /= static_cast<double>(n);
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, -10.0 * std::log10(mse));
}

std::vector<int> default_T_list(int t_max) {
    // fractions of the budget: 1, 3/4, 1/2, 3/8, 3/16
    std::vector<int> out;
    for (auto [num, den] : {std::pair{1, 1}, {3, 4}, {1, 2}, {3, 8}, {3, 16}}) {
        const int t = std::max(1, static_cast<int>(std::lround(t_max * static_cast<double>(num) / den)));
        if (out.empty() || out.back() != t) out.push_back(t);
    }
    return out;
}

namespace {

std::vector<SweepRecord> sweep_impl(const model::ModelParams& params, const datapipe::ImageDataset& dataset,
                                    std::vector<int> T_list,
                                    const std::vector<std::pair<double, double>>& scales, bool truncated) {
    require(!T_list.empty() && !scales.empty(), "cq_sweep: empty T_list or scale list");
    for (int t : T_list)
        require(t >= 1 && t <= params.dims.T_max, "cq_sweep: T outside [1, T_max=" +
                                                      std::to_string(params.dims.T_max) + "]");
    std::sort(T_list.begin(), T_list.end(), std::greater<int>());

    std::vector<SweepRecord> records;
    for (const auto& [s_y, s_x] : scales) {
        require(s_y >= 1.0 && s_x >= 1.0, "cq_sweep: scales must be >= 1");
        for (int t : T_list) {
            SweepRecord rec;
            rec.scale_y = s_y;
            rec.scale_x = s_x;
            rec.T = t;
            rec.K = params.dims.K;
            rec.n_images = static_cast<int>(dataset.size());
            const int border = static_cast<int>(std::ceil(std::max(s_y, s_x)));
            double psnr_sum = 0.0, ms_sum = 0.0;
            for (size_t i = 0; i < dataset.size(); ++i) {
                const Image& hr = dataset.get(i);
                const int lh = std::max(8, static_cast<int>(std::lround(hr.h / s_y)));
                const int lw = std::max(8, static_cast<int>(std::lround(hr.w / s_x)));
                const Image lr = datapipe::bicubic_resize(hr, lh, lw);
                const auto t0 = Clock::now();
                Image sr;
                if (truncated) {
                    sr = model::super_resolve_truncated(params, lr, hr.h, hr.w, t);
                } else {
                    model::CQConfig cq{params.dims.K, params.dims.T_max, t};
                    sr = model::super_resolve(params, lr, hr.h, hr.w, cq);
                }
                ms_sum += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
                psnr_sum += psnr_y(sr, hr, border);
            }
            rec.psnr_db = psnr_sum / static_cast<double>(dataset.size());
            rec.wall_ms = ms_sum / static_cast<double>(dataset.size());
            records.push_back(rec);
        }
    }
    return records;
}

}  // namespace

std::vector<SweepRecord> cq_sweep(const model::ModelParams& params, const datapipe::ImageDataset& dataset,
                                  std::vector<int> T_list,
                                  const std::vector<std::pair<double, double>>& scales) {
    return sweep_impl(params, dataset, std::move(T_list), scales, false);
}

std::vector<SweepRecord> baseline_truncation_eval(const model::ModelParams& params,
                                                  const datapipe::ImageDataset& dataset,
                                                  std::vector<int> T_list,
                                                  const std::vector<std::pair<double, double>>& scales) {
    return sweep_impl(params, dataset, std::move(T_list), scales, true);
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records) {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(static_cast<bool>(os), "write_sweep_csv: cannot open " + path.string());
    os << "scale_y,scale_x,T,K,psnr_db,wall_ms,n_images\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%d,%d,%.6f,%.4f,%d\n", r.scale_y, r.scale_x, r.T, r.K,
                      r.psnr_db, r.wall_ms, r.n_images);
        os << buf;
    }
}

std::vector<ProfileStat> runtime_profile(const std::vector<const model::ModelParams*>& models, int T,
                                         int repeats, int n_cells) {
    require(repeats >= 10, "runtime_profile: repeats must be >= 10");
    require(!models.empty(), "runtime_profile: no models");
    require(n_cells >= 1, "runtime_profile: n_cells must be >= 1");

    std::vector<ProfileStat> stats;
    for (const model::ModelParams* p : models) {
        require(T >= 1 && T <= p->dims.T_max, "runtime_profile: T outside [1, T_max]");
        std::mt19937_64 rng(7);
        Eigen::MatrixXd z(p->dims.D, n_cells);
        std::normal_distribution<double> g(0.0, 1.0);
        for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);

        // warm-up
        for (int i = 0; i < 3; ++i) (void)model::predict_batch(*p, z, T);

        std::vector<double> ms(repeats);
        model::PredictStats ps;
        for (int i = 0; i < repeats; ++i) {
            const auto t0 = Clock::now();
            model::PredictStats local;
            (void)model::predict_batch(*p, z, T, nullptr, &local);
            ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            ps = local;
        }
        std::sort(ms.begin(), ms.end());
        ProfileStat st;
        st.K = p->dims.K;
        st.median_ms = ms[ms.size() / 2];
        st.iqr_ms = ms[(3 * ms.size()) / 4] - ms[ms.size() / 4];
        st.steps_per_call = ps.steps / ps.cells;
        const double tick = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::duration(1))
                                .count();
        st.reliable = tick < 0.01 * st.median_ms;
        stats.push_back(st);
    }
    return stats;
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileStat>& stats, int T) {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(static_cast<bool>(os), "write_profile_csv: cannot open " + path.string());
    os << "T,K,steps,median_ms,iqr_ms,reliable\n";
    char buf[256];
    for (const auto& s : stats) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%ld,%.6f,%.6f,%d\n", T, s.K, s.steps_per_call, s.median_ms,
                      s.iqr_ms, s.reliable ? 1 : 0);
        os << buf;
    }
}

}  // namespace cqsr::eval
