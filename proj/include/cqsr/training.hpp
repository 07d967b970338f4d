#pragma once

#include <atomic>
#include <filesystem>
#include <functional>

#include "cqsr/datapipe.hpp"
#include "cqsr/model.hpp"

namespace cqsr::training {

using datapipe::PatchPair;
using datapipe::QuerySample;
using datapipe::Rng;
using model::ModelDims;
using model::ModelParams;

struct TrainConfig {
    double w_f = 1e-3;
    int K = 2;
    int T_max = 16;
    int batch_size = 16;
    int n_queries = 256;
    double lr_init = 1e-4;
    int epochs = 10;
    int steps_per_epoch = 50;
    int epoch_half = -1;  // -1: epochs / 2
    uint64_t seed = 0;
    int encoder_D = 16;
    int encoder_blocks = 2;
    int cell_width = 64;
    int embed_width = 32;
    bool abs_alignment = false;
    bool deterministic = false;
    double clip_norm = 1.0;
    bool fixed_T = false;  // train always at T_max (truncation-baseline surrogate)

    void validate() const;
    ModelDims dims() const {
        return ModelDims{encoder_D, encoder_blocks, cell_width, embed_width, K, T_max};
    }
    int resolved_epoch_half() const { return epoch_half >= 0 ? epoch_half : epochs / 2; }
};

struct LossBreakdown {
    double l_image = 0.0;
    double l_align = 0.0;
    double total = 0.0;
    int T_used = 0;
};

double l1_loss(const std::vector<Vec3>& pred, const std::vector<Vec3>& target);

LossBreakdown total_loss(const std::vector<Vec3>& pred, const std::vector<Vec3>& target,
                         const std::vector<fourier::FrequencyGroup>& groups, double w_f,
                         bool abs_alignment = false);

// Uniform integer in [1, T_max].
int sample_T(Rng& rng, int t_max);

struct Batch {
    std::vector<PatchPair> pairs;
    std::vector<std::vector<QuerySample>> queries;  // one list per pair
};

struct AdamState {
    std::vector<Eigen::VectorXd> m, v;
    long step = 0;

    static AdamState init_for(const ModelParams& p);
};

// Forward pass and (optionally) analytic gradients of the total loss for a
// fixed T. `grads` may be null for a loss-only evaluation.
LossBreakdown batch_loss(const ModelParams& params, const Batch& batch, int T, const TrainConfig& cfg,
                         ModelParams* grads);

// Draws one T for the batch, runs batch_loss, applies one Adam update
// (beta1 = 0.9, beta2 = 0.999, grads clipped at global norm cfg.clip_norm).
// Aborts (params untouched) on a non-finite loss.
LossBreakdown train_step(ModelParams& params, AdamState& adam, const Batch& batch, const TrainConfig& cfg,
                         double lr, Rng& rng);

struct HistoryRow {
    long step;
    int T_used;
    double l_image, l_align, total, lr;
};

struct FitResult {
    ModelParams params;
    std::vector<HistoryRow> history;
    int epochs_done = 0;
};

// Epoch loop with the halve-once lr schedule; writes per-step loss history.
// `checkpoint_path`, when non-empty, is written after every epoch and used to
// resume an interrupted run.
FitResult fit(const TrainConfig& cfg, const datapipe::ImageDataset& dataset,
              const std::filesystem::path& checkpoint_path = {},
              const std::function<void(const HistoryRow&)>& on_step = nullptr,
              const std::atomic<bool>* cancel = nullptr);

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history);

// Max relative error between analytic gradients and central finite
// differences (step 1e-5) on a random subsample of parameters.
double grad_check(const ModelParams& params, const Batch& batch, const TrainConfig& cfg, int T,
                  int n_samples = 200, uint64_t seed = 1234);

Batch make_batch(const datapipe::ImageDataset& dataset, Rng& rng, const TrainConfig& cfg);

}  // namespace cqsr::training
