#include "cqsr/training.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cqsr/checkpoint.hpp"

namespace cqsr::training {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using fourier::FrequencyGroup;
using model::PredictTrace;

void TrainConfig::validate() const {
    require(w_f >= 0.0, "TrainConfig: w_f must be >= 0");
    require(K >= 1 && K <= T_max, "TrainConfig: need 1 <= K <= T_max");
    require(batch_size >= 1, "TrainConfig: batch_size must be >= 1");
    require(n_queries >= 1, "TrainConfig: n_queries must be >= 1");
    require(lr_init > 0.0, "TrainConfig: lr_init must be > 0");
    require(epochs >= 0 && steps_per_epoch >= 1, "TrainConfig: bad schedule");
    require(encoder_D >= 1 && cell_width >= 1 && embed_width >= 1 && encoder_blocks >= 0,
            "TrainConfig: bad architecture knobs");
}

double l1_loss(const std::vector<Vec3>& pred, const std::vector<Vec3>& target) {
    require(!pred.empty(), "l1_loss: empty input");
    require(pred.size() == target.size(), "l1_loss: length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < pred.size(); ++i)
        for (int c = 0; c < 3; ++c) acc += std::abs(pred[i][c] - target[i][c]);
    return acc / (static_cast<double>(pred.size()) * 3.0);
}

LossBreakdown total_loss(const std::vector<Vec3>& pred, const std::vector<Vec3>& target,
                         const std::vector<FrequencyGroup>& groups, double w_f, bool abs_alignment) {
    LossBreakdown out;
    out.l_image = l1_loss(pred, target);
    out.l_align = groups.empty() ? 0.0 : fourier::alignment_loss(groups, abs_alignment);
    out.total = out.l_image + w_f * out.l_align;
    return out;
}

int sample_T(Rng& rng, int t_max) {
    require(t_max >= 1, "sample_T: T_max must be >= 1");
    std::uniform_int_distribution<int> u(1, t_max);
    return u(rng);
}

AdamState AdamState::init_for(const ModelParams& p) {
    AdamState s;
    for (const auto& v : p.views()) {
        s.m.push_back(VectorXd::Zero(v.size));
        s.v.push_back(VectorXd::Zero(v.size));
    }
    return s;
}

namespace {

struct QueryRef {
    int col = 0;  // global predictor column
    Vec2 delta{0.0, 0.0};
    Vec3 target{0.0, 0.0, 0.0};
};

}  // namespace

LossBreakdown batch_loss(const ModelParams& params, const Batch& batch, int T, const TrainConfig& cfg,
                         ModelParams* grads) {
    require(!batch.pairs.empty(), "batch_loss: empty batch");
    require(batch.pairs.size() == batch.queries.size(), "batch_loss: pairs/queries mismatch");
    require(T >= 1 && T <= params.dims.T_max, "batch_loss: T outside [1, T_max]");
    const int K = params.dims.K;
    const int n_b = static_cast<int>(batch.pairs.size());

    // encode each LR patch and map every query onto a unique (sample, cell) column
    std::vector<model::EncoderTrace> enc_traces(grads ? n_b : 0);
    std::vector<model::LatentGrid> grids(n_b);
    std::vector<QueryRef> refs;
    std::vector<std::pair<int, int>> col_owner;  // (sample, cell key)
    MatrixXd z(params.dims.D, 0);
    {
        std::vector<VectorXd> cols;
        for (int b = 0; b < n_b; ++b) {
            if (grads)
                grids[b] = model::encode_traced(params, batch.pairs[b].lr, enc_traces[b]);
            else
                grids[b] = model::encode(params, batch.pairs[b].lr);
            const int hp = batch.pairs[b].hr.h, wp = batch.pairs[b].hr.w;
            std::unordered_map<int, int> col_of_cell;
            for (const QuerySample& q : batch.queries[b]) {
                const model::CellRef ref = model::locate_cell(q.coord, grids[b].h, grids[b].w);
                (void)hp;
                (void)wp;
                const int key = ref.iy * grids[b].w + ref.ix;
                auto [it, inserted] = col_of_cell.try_emplace(key, static_cast<int>(cols.size()));
                if (inserted) {
                    cols.push_back(grids[b].codes.col(key));
                    col_owner.emplace_back(b, key);
                }
                refs.push_back({it->second, ref.delta, q.target_rgb});
            }
        }
        z.resize(params.dims.D, static_cast<Eigen::Index>(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c) z.col(c) = cols[c];
    }
    const auto m = z.cols();

    PredictTrace trace;
    const auto outputs = model::predict_batch(params, z, T, grads ? &trace : nullptr, nullptr);
    const MatrixXd dc = model::predict_dc(params, z);
    const int steps = static_cast<int>(outputs.size());

    std::vector<fourier::ComponentSet> sets(m);
    for (Eigen::Index c = 0; c < m; ++c) sets[c] = model::collect_components(outputs, dc, static_cast<int>(c), T, K);

    std::vector<Vec3> pred(refs.size()), target(refs.size());
    for (size_t q = 0; q < refs.size(); ++q) {
        pred[q] = fourier::reconstruct_rgb(sets[refs[q].col], refs[q].delta);
        target[q] = refs[q].target;
    }

    // alignment groups: the K frequency slots of every executed step, per cell
    std::vector<FrequencyGroup> groups;
    if (K > 1) {
        groups.reserve(static_cast<size_t>(m) * steps);
        for (Eigen::Index c = 0; c < m; ++c)
            for (int s = 0; s < steps; ++s) {
                FrequencyGroup g;
                g.freqs.reserve(K);
                for (int k = 0; k < K; ++k) g.freqs.push_back({outputs[s](8 * k, c), outputs[s](8 * k + 1, c)});
                groups.push_back(std::move(g));
            }
    }

    LossBreakdown loss = total_loss(pred, target, groups, cfg.w_f, cfg.abs_alignment);
    loss.T_used = T;
    if (!grads) return loss;

    // ---- backward ----
    const double d_pixel = 1.0 / (static_cast<double>(refs.size()) * 3.0);
    std::vector<fourier::ComponentSetGrad> set_grads(m);
    for (Eigen::Index c = 0; c < m; ++c) set_grads[c].components.resize(sets[c].components.size());
    for (size_t q = 0; q < refs.size(); ++q) {
        Vec3 d_rgb;
        for (int ch = 0; ch < 3; ++ch) {
            const double r = pred[q][ch] - target[q][ch];
            d_rgb[ch] = (r > 0.0) ? d_pixel : (r < 0.0 ? -d_pixel : 0.0);
        }
        fourier::reconstruct_rgb_backward(sets[refs[q].col], refs[q].delta, d_rgb, set_grads[refs[q].col]);
    }

    std::vector<MatrixXd> d_out(steps, MatrixXd::Zero(params.dims.out_width(), m));
    for (Eigen::Index c = 0; c < m; ++c) {
        for (int t = 0; t < static_cast<int>(sets[c].components.size()); ++t) {
            const int s = t / K, k = t % K;
            const auto& g = set_grads[c].components[t];
            d_out[s](8 * k + 0, c) += g.freq[0];
            d_out[s](8 * k + 1, c) += g.freq[1];
            for (int i = 0; i < 3; ++i) {
                d_out[s](8 * k + 2 + i, c) += g.amp_cos[i];
                d_out[s](8 * k + 5 + i, c) += g.amp_sin[i];
            }
        }
    }
    if (K > 1 && cfg.w_f != 0.0) {
        std::vector<std::vector<Vec2>> grad_freqs(groups.size(), std::vector<Vec2>(K, Vec2{0.0, 0.0}));
        fourier::alignment_loss_backward(groups, cfg.w_f, grad_freqs, cfg.abs_alignment);
        size_t gi = 0;
        for (Eigen::Index c = 0; c < m; ++c)
            for (int s = 0; s < steps; ++s, ++gi)
                for (int k = 0; k < K; ++k) {
                    d_out[s](8 * k + 0, c) += grad_freqs[gi][k][0];
                    d_out[s](8 * k + 1, c) += grad_freqs[gi][k][1];
                }
    }
    MatrixXd d_dc(3, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (int i = 0; i < 3; ++i) d_dc(i, c) = set_grads[c].dc[i];

    const MatrixXd d_z = model::predict_backward(params, trace, d_out, d_dc, *grads);

    // scatter latent gradients back through each sample's encoder
    for (int b = 0; b < n_b; ++b) {
        MatrixXd d_codes = MatrixXd::Zero(params.dims.D, grids[b].codes.cols());
        bool any = false;
        for (size_t c = 0; c < col_owner.size(); ++c) {
            if (col_owner[c].first != b) continue;
            d_codes.col(col_owner[c].second) += d_z.col(static_cast<Eigen::Index>(c));
            any = true;
        }
        if (any) model::encode_backward(params, enc_traces[b], d_codes, *grads);
    }
    return loss;
}

namespace {

void adam_update(ModelParams& params, AdamState& adam, const ModelParams& grads, double lr,
                 double clip_norm) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    auto pviews = params.views();
    auto gviews = grads.views();

    double sq = 0.0;
    for (const auto& g : gviews)
        for (Eigen::Index i = 0; i < g.size; ++i) sq += g.data[i] * g.data[i];
    const double norm = std::sqrt(sq);
    const double scale = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

    adam.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam.step));
    for (size_t k = 0; k < pviews.size(); ++k) {
        double* p = pviews[k].data;
        const double* g = gviews[k].data;
        double* mm = adam.m[k].data();
        double* vv = adam.v[k].data();
        for (Eigen::Index i = 0; i < pviews[k].size; ++i) {
            const double gi = g[i] * scale;
            mm[i] = beta1 * mm[i] + (1.0 - beta1) * gi;
            vv[i] = beta2 * vv[i] + (1.0 - beta2) * gi * gi;
            p[i] -= lr * (mm[i] / bc1) / (std::sqrt(vv[i] / bc2) + eps);
        }
    }
}

}  // namespace

LossBreakdown train_step(ModelParams& params, AdamState& adam, const Batch& batch, const TrainConfig& cfg,
                         double lr, Rng& rng) {
    cfg.validate();
    const int T = cfg.fixed_T ? cfg.T_max : sample_T(rng, cfg.T_max);
    ModelParams grads = model::zeros_like(params);
    const LossBreakdown loss = batch_loss(params, batch, T, cfg, &grads);
    if (!std::isfinite(loss.total)) {
        std::cerr << "train_step: non-finite loss (l_image=" << loss.l_image << ", l_align=" << loss.l_align
                  << "), step aborted\n";
        return loss;
    }
    adam_update(params, adam, grads, lr, cfg.clip_norm);
    return loss;
}

Batch make_batch(const datapipe::ImageDataset& dataset, Rng& rng, const TrainConfig& cfg) {
    Batch batch;
    std::uniform_int_distribution<size_t> pick(0, dataset.size() - 1);
    for (int b = 0; b < cfg.batch_size; ++b) {
        auto [pair, queries] = datapipe::make_training_sample(dataset.get(pick(rng)), rng, cfg.n_queries);
        batch.pairs.push_back(std::move(pair));
        batch.queries.push_back(std::move(queries));
    }
    return batch;
}

FitResult fit(const TrainConfig& cfg, const datapipe::ImageDataset& dataset,
              const std::filesystem::path& checkpoint_path,
              const std::function<void(const HistoryRow&)>& on_step, const std::atomic<bool>* cancel) {
    cfg.validate();
    require(dataset.size() > 0, "fit: empty dataset");

    FitResult result;
    int epoch_start = 0;
    if (!checkpoint_path.empty() && std::filesystem::exists(checkpoint_path)) {
        auto loaded = checkpoint::load(checkpoint_path);
        require(loaded.manifest.dims == cfg.dims(), "fit: existing checkpoint architecture mismatch");
        result.params = std::move(loaded.params);
        epoch_start = loaded.manifest.epoch;
        result.epochs_done = epoch_start;
        std::cerr << "fit: resuming from " << checkpoint_path << " at epoch " << epoch_start << "\n";
    } else {
        result.params = model::init_params(cfg.dims(), cfg.seed);
    }

    AdamState adam = AdamState::init_for(result.params);
    const int e_half = cfg.resolved_epoch_half();
    long step_no = static_cast<long>(epoch_start) * cfg.steps_per_epoch;
    for (int epoch = epoch_start; epoch < cfg.epochs; ++epoch) {
        Rng rng(cfg.seed ^ (0x9e3779b97f4a7c15ull * static_cast<uint64_t>(epoch + 1)));
        const double lr = (epoch >= e_half) ? cfg.lr_init * 0.5 : cfg.lr_init;
        for (int s = 0; s < cfg.steps_per_epoch; ++s) {
            if (cancel && cancel->load()) {
                if (!checkpoint_path.empty()) {
                    checkpoint::Manifest manifest;
                    manifest.dims = cfg.dims();
                    manifest.seed = cfg.seed;
                    manifest.epoch = epoch;  // restart this epoch on resume
                    manifest.fixed_T = cfg.fixed_T;
                    manifest.w_f = cfg.w_f;
                    checkpoint::save(checkpoint_path, result.params, manifest);
                }
                return result;
            }
            const Batch batch = make_batch(dataset, rng, cfg);
            const LossBreakdown loss = train_step(result.params, adam, batch, cfg, lr, rng);
            HistoryRow row{step_no++, loss.T_used, loss.l_image, loss.l_align, loss.total, lr};
            result.history.push_back(row);
            if (on_step) on_step(row);
        }
        result.epochs_done = epoch + 1;
        if (!checkpoint_path.empty()) {
            checkpoint::Manifest manifest;
            manifest.dims = cfg.dims();
            manifest.seed = cfg.seed;
            manifest.epoch = epoch + 1;
            manifest.fixed_T = cfg.fixed_T;
            manifest.w_f = cfg.w_f;
            checkpoint::save(checkpoint_path, result.params, manifest);
        }
    }
    return result;
}

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history) {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(static_cast<bool>(os), "write_history_csv: cannot open " + path.string());
    os << "step,T_used,l_image,l_align,total,lr\n";
    char buf[256];
    for (const auto& r : history) {
        std::snprintf(buf, sizeof(buf), "%ld,%d,%.12g,%.12g,%.12g,%.12g\n", r.step, r.T_used, r.l_image,
                      r.l_align, r.total, r.lr);
        os << buf;
    }
}

double grad_check(const ModelParams& params, const Batch& batch, const TrainConfig& cfg, int T,
                  int n_samples, uint64_t seed) {
    require(params.param_count() <= 50000, "grad_check: model too large for finite differences");
    ModelParams grads = model::zeros_like(params);
    batch_loss(params, batch, T, cfg, &grads);

    ModelParams work = params;
    auto wviews = work.views();
    auto gviews = grads.views();
    Eigen::Index total = work.param_count();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, total - 1);
    const double h = 1e-5;
    double max_err = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        Eigen::Index flat = pick(rng);
        size_t k = 0;
        while (flat >= wviews[k].size) flat -= wviews[k++].size;
        double* slot = wviews[k].data + flat;
        const double orig = *slot;
        *slot = orig + h;
        const double lp = batch_loss(work, batch, T, cfg, nullptr).total;
        *slot = orig - h;
        const double lm = batch_loss(work, batch, T, cfg, nullptr).total;
        *slot = orig;
        const double fd = (lp - lm) / (2.0 * h);
        const double an = gviews[k].data[flat];
        const double err = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6});
        max_err = std::max(max_err, err);
    }
    return max_err;
}

}  // namespace cqsr::training
