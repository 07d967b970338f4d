#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "cqsr/fourier.hpp"
#include "cqsr/types.hpp"

namespace cqsr::model {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Components-per-step and component budget for one inference call.
struct CQConfig {
    int K = 2;
    int T_max = 16;
    int T = 16;

    void validate() const {
        require(K >= 1, "CQConfig: K must be >= 1");
        require(T_max >= 1, "CQConfig: T_max must be >= 1");
        require(K <= T_max, "CQConfig: K must be <= T_max");
        require(T >= 0 && T <= T_max, "CQConfig: T must lie in [0, T_max]");
    }
};

// Architecture descriptor; enough to rebuild every parameter shape.
struct ModelDims {
    int D = 16;       // latent width
    int blocks = 2;   // encoder residual blocks
    int cell = 64;    // recurrent cell width
    int embed = 32;   // embedding width of the previous step's output
    int K = 2;        // components emitted per step
    int T_max = 16;

    int slot_width() const { return 8; }            // freq(2) + amp_cos(3) + amp_sin(3)
    int out_width() const { return 8 * K; }

    bool operator==(const ModelDims&) const = default;
};

struct ResBlockParams {
    MatrixXd w1, w2;  // D x 9D (im2col layout)
    VectorXd b1, b2;
};

struct ParamView {
    std::string name;
    double* data;
    Eigen::Index size;
};

struct ModelParams {
    ModelDims dims;

    MatrixXd enc_in_w;  // D x 27
    VectorXd enc_in_b;
    std::vector<ResBlockParams> blocks;

    MatrixXd init_w;   // cell x D
    VectorXd init_b;
    MatrixXd embed_w;  // embed x 8K
    VectorXd embed_b;
    MatrixXd gru_w;    // 3*cell x embed   (gate order r, z, n)
    MatrixXd gru_u;    // 3*cell x cell
    VectorXd gru_b;    // 3*cell
    MatrixXd head_w;   // 8K x cell
    VectorXd head_b;
    MatrixXd dc_w;     // 3 x D
    VectorXd dc_b;

    std::vector<ParamView> views();
    std::vector<ParamView> views() const;  // const data viewed as mutable for serialization only
    Eigen::Index param_count() const;
};

// Fan-in-scaled uniform init; frequency-head biases get small distinct values
// so the K slots break symmetry under the alignment loss.
ModelParams init_params(const ModelDims& dims, uint64_t seed);

// Zero-valued gradient buffers with the same shapes.
ModelParams zeros_like(const ModelParams& p);

// h x w grid of D-dimensional latent codes; column i*w+j holds cell (i,j).
struct LatentGrid {
    int h = 0, w = 0, D = 0;
    MatrixXd codes;  // D x (h*w)
};

struct PredictorState {
    VectorXd hidden;
    int step_index = 0;
    VectorXd last_output;  // 8K, zeros before step 1
};

// Counts recurrent-cell evaluations; the anytime-cost instrument.
struct PredictStats {
    long steps = 0;
    long cells = 0;
};

// ---- encoder ----

struct EncoderTrace {
    MatrixXd input;                 // 3 x hw
    MatrixXd in_out;                // D x hw, after input conv
    std::vector<MatrixXd> mid_pre;  // per block: pre-ReLU conv1 output
    std::vector<MatrixXd> mid;      // per block: post-ReLU
    std::vector<MatrixXd> out;      // per block: block output
    int h = 0, w = 0;
};

LatentGrid encode(const ModelParams& p, const Image& lr);
LatentGrid encode_traced(const ModelParams& p, const Image& lr, EncoderTrace& trace);
// d_codes is D x hw; accumulates into grads.
void encode_backward(const ModelParams& p, const EncoderTrace& trace, const MatrixXd& d_codes,
                     ModelParams& grads);

// ---- predictor ----

PredictorState init_state(const ModelParams& p, const VectorXd& z);
std::pair<std::vector<fourier::FourierComponent>, PredictorState> step(const ModelParams& p,
                                                                       const PredictorState& state);

fourier::ComponentSet predict_components(const ModelParams& p, const VectorXd& z, const CQConfig& cq,
                                         PredictStats* stats = nullptr);

// Batched predictor over M latent columns; per-step raw outputs are 8K x M.
struct PredictTrace {
    MatrixXd z;                   // D x M
    MatrixXd h0;                  // cell x M
    std::vector<MatrixXd> last;   // input of each step, 8K x M
    std::vector<MatrixXd> x;      // embedded input, embed x M
    std::vector<MatrixXd> r, zg, n, h_prev, u_n;
    std::vector<MatrixXd> out;    // head output per step, 8K x M
    int steps = 0;
};

// Runs ceil(T/K) steps for all M columns; outputs[s] is the raw 8K x M head
// output of step s. The flat component order is recurrence-major.
std::vector<MatrixXd> predict_batch(const ModelParams& p, const MatrixXd& z, int T,
                                    PredictTrace* trace = nullptr, PredictStats* stats = nullptr);

MatrixXd predict_dc(const ModelParams& p, const MatrixXd& z);  // 3 x M

// d_out mirrors the per-step outputs; d_dc is 3 x M. Returns d_z (D x M).
MatrixXd predict_backward(const ModelParams& p, const PredictTrace& trace,
                          const std::vector<MatrixXd>& d_out, const MatrixXd& d_dc, ModelParams& grads);

// Assembles the first T components of column m from per-step outputs.
fourier::ComponentSet collect_components(const std::vector<MatrixXd>& outputs, const MatrixXd& dc, int m,
                                         int T, int K);

// ---- query pipeline ----

struct CellRef {
    int iy = 0, ix = 0;    // latent cell index
    Vec2 delta{0.0, 0.0};  // scaled local offset, one cell spans [-1,1]
};

// Nearest-cell lookup for an HR-normalized coordinate; boundary ties resolve
// toward the lower-index cell.
CellRef locate_cell(const Vec2& coord, int h, int w);

std::vector<Vec3> query_rgb(const ModelParams& p, const LatentGrid& grid, const std::vector<Vec2>& coords,
                            const CQConfig& cq, PredictStats* stats = nullptr);

// Full-grid evaluation; clamps to [0,1] at export.
Image super_resolve(const ModelParams& p, const Image& lr, int out_h, int out_w, const CQConfig& cq,
                    PredictStats* stats = nullptr);

// Variant for the fixed-T truncation baseline: predicts T_max components per
// cell, keeps the top T by amplitude, then reconstructs.
Image super_resolve_truncated(const ModelParams& p, const Image& lr, int out_h, int out_w, int t,
                              PredictStats* stats = nullptr);

}  // namespace cqsr::model
