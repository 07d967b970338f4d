#include "cqsr/model.hpp"

#include <cmath>
#include <unordered_map>

#include "cqsr/datapipe.hpp"

namespace cqsr::model {

namespace {

constexpr double kCoordEps = 1e-6;

MatrixXd im2col3x3(const MatrixXd& x, int h, int w) {
    const int cin = static_cast<int>(x.rows());
    MatrixXd col = MatrixXd::Zero(static_cast<Eigen::Index>(cin) * 9, static_cast<Eigen::Index>(h) * w);
    for (int c = 0; c < cin; ++c) {
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                const int row = c * 9 + ky * 3 + kx;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    for (int x2 = 0; x2 < w; ++x2) {
                        const int sx = x2 + kx - 1;
                        if (sx < 0 || sx >= w) continue;
                        col(row, static_cast<Eigen::Index>(y) * w + x2) = x(c, static_cast<Eigen::Index>(sy) * w + sx);
                    }
                }
            }
        }
    }
    return col;
}

// scatter-add transpose of im2col3x3
MatrixXd col2im3x3(const MatrixXd& dcol, int cin, int h, int w) {
    MatrixXd dx = MatrixXd::Zero(cin, static_cast<Eigen::Index>(h) * w);
    for (int c = 0; c < cin; ++c) {
        for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
                const int row = c * 9 + ky * 3 + kx;
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ky - 1;
                    if (sy < 0 || sy >= h) continue;
                    for (int x2 = 0; x2 < w; ++x2) {
                        const int sx = x2 + kx - 1;
                        if (sx < 0 || sx >= w) continue;
                        dx(c, static_cast<Eigen::Index>(sy) * w + sx) += dcol(row, static_cast<Eigen::Index>(y) * w + x2);
                    }
                }
            }
        }
    }
    return dx;
}

MatrixXd conv3x3(const MatrixXd& wgt, const VectorXd& bias, const MatrixXd& x, int h, int w) {
    MatrixXd y = wgt * im2col3x3(x, h, w);
    y.colwise() += bias;
    return y;
}

VectorXd sigmoid(const VectorXd& v) { return (1.0 + (-v.array()).exp()).inverse().matrix(); }
MatrixXd sigmoid(const MatrixXd& v) { return (1.0 + (-v.array()).exp()).inverse().matrix(); }

}  // namespace

std::vector<ParamView> ModelParams::views() {
    std::vector<ParamView> v;
    auto add = [&v](const std::string& name, MatrixXd& m) { v.push_back({name, m.data(), m.size()}); };
    auto addv = [&v](const std::string& name, VectorXd& m) { v.push_back({name, m.data(), m.size()}); };
    add("enc_in_w", enc_in_w);
    addv("enc_in_b", enc_in_b);
    for (size_t i = 0; i < blocks.size(); ++i) {
        const std::string tag = "block" + std::to_string(i) + ".";
        add(tag + "w1", blocks[i].w1);
        addv(tag + "b1", blocks[i].b1);
        add(tag + "w2", blocks[i].w2);
        addv(tag + "b2", blocks[i].b2);
    }
    add("init_w", init_w);
    addv("init_b", init_b);
    add("embed_w", embed_w);
    addv("embed_b", embed_b);
    add("gru_w", gru_w);
    add("gru_u", gru_u);
    addv("gru_b", gru_b);
    add("head_w", head_w);
    addv("head_b", head_b);
    add("dc_w", dc_w);
    addv("dc_b", dc_b);
    return v;
}

std::vector<ParamView> ModelParams::views() const {
    return const_cast<ModelParams*>(this)->views();
}

Eigen::Index ModelParams::param_count() const {
    Eigen::Index n = 0;
    for (const auto& v : views()) n += v.size;
    return n;
}

ModelParams init_params(const ModelDims& dims, uint64_t seed) {
    require(dims.D >= 1 && dims.blocks >= 0 && dims.cell >= 1 && dims.embed >= 1, "init_params: bad dims");
    CQConfig{dims.K, dims.T_max, dims.T_max}.validate();
    ModelParams p;
    p.dims = dims;
    std::mt19937_64 rng(seed);
    auto fill = [&rng](auto& m, Eigen::Index fan_in) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = s * u(rng);
    };
    const int d = dims.D, cw = dims.cell, ew = dims.embed, ow = dims.out_width();
    p.enc_in_w.resize(d, 27);
    fill(p.enc_in_w, 27);
    p.enc_in_b = VectorXd::Zero(d);
    p.blocks.resize(dims.blocks);
    for (auto& blk : p.blocks) {
        blk.w1.resize(d, 9 * d);
        blk.w2.resize(d, 9 * d);
        fill(blk.w1, 9 * d);
        fill(blk.w2, 9 * d);
        blk.b1 = VectorXd::Zero(d);
        blk.b2 = VectorXd::Zero(d);
    }
    p.init_w.resize(cw, d);
    fill(p.init_w, d);
    p.init_b = VectorXd::Zero(cw);
    p.embed_w.resize(ew, ow);
    fill(p.embed_w, ow);
    p.embed_b = VectorXd::Zero(ew);
    p.gru_w.resize(3 * cw, ew);
    fill(p.gru_w, ew);
    p.gru_u.resize(3 * cw, cw);
    fill(p.gru_u, cw);
    p.gru_b = VectorXd::Zero(3 * cw);
    p.head_w.resize(ow, cw);
    fill(p.head_w, cw);
    p.head_b = VectorXd::Zero(ow);
    // amplitude slots start near zero so rarely-supervised late components do
    // not inject noise before their budget gets sampled
    for (int k = 0; k < dims.K; ++k) p.head_w.middleRows(k * 8 + 2, 6) *= 0.1;
    // distinct frequency biases break symmetry between the K slots
    for (int k = 0; k < dims.K; ++k)
        for (int a = 0; a < 2; ++a) {
            const int i = 2 * k + a;
            p.head_b[k * 8 + a] = -1.0 + 2.0 * (i + 0.5) / (2.0 * dims.K);
        }
    p.dc_w.resize(3, d);
    fill(p.dc_w, d);
    p.dc_b = VectorXd::Zero(3);
    return p;
}

ModelParams zeros_like(const ModelParams& p) {
    ModelParams g = p;
    for (auto& v : g.views()) std::fill(v.data, v.data + v.size, 0.0);
    return g;
}

// ---- encoder ----

LatentGrid encode_traced(const ModelParams& p, const Image& lr, EncoderTrace& trace) {
    require(lr.h >= 8 && lr.w >= 8, "encode: input must be at least 8x8");
    require(lr.finite(), "encode: non-finite pixel");
    for (double v : lr.data) require(v >= -kCoordEps && v <= 1.0 + kCoordEps, "encode: pixel outside [0,1]");

    const int h = lr.h, w = lr.w;
    trace.h = h;
    trace.w = w;
    trace.input.resize(3, static_cast<Eigen::Index>(h) * w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) trace.input(c, static_cast<Eigen::Index>(y) * w + x) = lr.at(y, x, c);

    trace.in_out = conv3x3(p.enc_in_w, p.enc_in_b, trace.input, h, w);
    trace.mid_pre.clear();
    trace.mid.clear();
    trace.out.clear();
    MatrixXd cur = trace.in_out;
    for (const auto& blk : p.blocks) {
        MatrixXd pre = conv3x3(blk.w1, blk.b1, cur, h, w);
        MatrixXd mid = pre.cwiseMax(0.0);
        MatrixXd out = cur + conv3x3(blk.w2, blk.b2, mid, h, w);
        trace.mid_pre.push_back(std::move(pre));
        trace.mid.push_back(std::move(mid));
        trace.out.push_back(out);
        cur = std::move(out);
    }
    LatentGrid grid;
    grid.h = h;
    grid.w = w;
    grid.D = p.dims.D;
    grid.codes = std::move(cur);
    return grid;
}

LatentGrid encode(const ModelParams& p, const Image& lr) {
    EncoderTrace trace;
    return encode_traced(p, lr, trace);
}

void encode_backward(const ModelParams& p, const EncoderTrace& trace, const MatrixXd& d_codes,
                     ModelParams& grads) {
    const int h = trace.h, w = trace.w;
    MatrixXd d_cur = d_codes;
    for (int b = static_cast<int>(p.blocks.size()) - 1; b >= 0; --b) {
        const auto& blk = p.blocks[b];
        const MatrixXd& block_in = (b == 0) ? trace.in_out : trace.out[b - 1];
        // out = in + conv2(relu(conv1(in)))
        MatrixXd col_mid = im2col3x3(trace.mid[b], h, w);
        grads.blocks[b].w2 += d_cur * col_mid.transpose();
        grads.blocks[b].b2 += d_cur.rowwise().sum();
        MatrixXd d_mid = col2im3x3(blk.w2.transpose() * d_cur, p.dims.D, h, w);
        MatrixXd d_pre = (trace.mid_pre[b].array() > 0.0).select(d_mid, 0.0);
        MatrixXd col_in = im2col3x3(block_in, h, w);
        grads.blocks[b].w1 += d_pre * col_in.transpose();
        grads.blocks[b].b1 += d_pre.rowwise().sum();
        d_cur += col2im3x3(blk.w1.transpose() * d_pre, p.dims.D, h, w);  // skip path is d_cur itself
    }
    MatrixXd col_img = im2col3x3(trace.input, h, w);
    grads.enc_in_w += d_cur * col_img.transpose();
    grads.enc_in_b += d_cur.rowwise().sum();
}

// ---- predictor ----

PredictorState init_state(const ModelParams& p, const VectorXd& z) {
    require(z.size() == p.dims.D, "init_state: z has wrong width");
    require(z.allFinite(), "init_state: non-finite z");
    PredictorState s;
    s.hidden = p.init_w * z + p.init_b;
    s.step_index = 0;
    s.last_output = VectorXd::Zero(p.dims.out_width());
    return s;
}

std::pair<std::vector<fourier::FourierComponent>, PredictorState> step(const ModelParams& p,
                                                                       const PredictorState& state) {
    const int cw = p.dims.cell;
    require(state.hidden.size() == cw, "step: corrupted hidden state size");
    require(state.last_output.size() == p.dims.out_width(), "step: corrupted last_output size");

    const VectorXd x = p.embed_w * state.last_output + p.embed_b;
    const VectorXd wx = p.gru_w * x + p.gru_b;
    const VectorXd uh = p.gru_u * state.hidden;
    const VectorXd r = sigmoid(VectorXd(wx.segment(0, cw) + uh.segment(0, cw)));
    const VectorXd zg = sigmoid(VectorXd(wx.segment(cw, cw) + uh.segment(cw, cw)));
    const VectorXd n =
        (wx.segment(2 * cw, cw) + r.cwiseProduct(uh.segment(2 * cw, cw))).array().tanh().matrix();
    PredictorState next;
    next.hidden = (1.0 - zg.array()).matrix().cwiseProduct(n) + zg.cwiseProduct(state.hidden);
    next.step_index = state.step_index + 1;
    next.last_output = p.head_w * next.hidden + p.head_b;

    std::vector<fourier::FourierComponent> comps(p.dims.K);
    for (int k = 0; k < p.dims.K; ++k) {
        const auto slot = next.last_output.segment(8 * k, 8);
        comps[k].freq = {slot[0], slot[1]};
        comps[k].amp_cos = {slot[2], slot[3], slot[4]};
        comps[k].amp_sin = {slot[5], slot[6], slot[7]};
    }
    return {std::move(comps), std::move(next)};
}

fourier::ComponentSet predict_components(const ModelParams& p, const VectorXd& z, const CQConfig& cq,
                                         PredictStats* stats) {
    cq.validate();
    require(cq.K == p.dims.K, "predict_components: CQConfig.K does not match model K");
    fourier::ComponentSet set;
    const VectorXd dc = p.dc_w * z + p.dc_b;
    set.dc = {dc[0], dc[1], dc[2]};
    if (cq.T == 0) return set;

    const int steps = (cq.T + cq.K - 1) / cq.K;
    PredictorState state = init_state(p, z);
    if (stats) stats->cells += 1;
    for (int s = 0; s < steps; ++s) {
        auto [comps, next] = step(p, state);
        if (stats) stats->steps += 1;
        for (auto& c : comps) {
            if (static_cast<int>(set.components.size()) >= cq.T) break;  // surplus of the last step
            set.components.push_back(c);
        }
        state = std::move(next);
    }
    return set;
}

std::vector<MatrixXd> predict_batch(const ModelParams& p, const MatrixXd& z, int T, PredictTrace* trace,
                                    PredictStats* stats) {
    require(z.rows() == p.dims.D, "predict_batch: z has wrong width");
    require(T >= 0, "predict_batch: negative T");
    const int cw = p.dims.cell;
    const int K = p.dims.K;
    const Eigen::Index m = z.cols();
    const int steps = (T + K - 1) / K;

    MatrixXd h = (p.init_w * z).colwise() + p.init_b;
    MatrixXd last = MatrixXd::Zero(p.dims.out_width(), m);
    if (trace) {
        *trace = PredictTrace{};
        trace->z = z;
        trace->h0 = h;
        trace->steps = steps;
    }
    std::vector<MatrixXd> outputs;
    outputs.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        MatrixXd x = (p.embed_w * last).colwise() + p.embed_b;
        MatrixXd wx = (p.gru_w * x).colwise() + p.gru_b;
        MatrixXd uh = p.gru_u * h;
        MatrixXd r = sigmoid(MatrixXd(wx.middleRows(0, cw) + uh.middleRows(0, cw)));
        MatrixXd zg = sigmoid(MatrixXd(wx.middleRows(cw, cw) + uh.middleRows(cw, cw)));
        MatrixXd u_n = uh.middleRows(2 * cw, cw);
        MatrixXd n = (wx.middleRows(2 * cw, cw) + r.cwiseProduct(u_n)).array().tanh().matrix();
        MatrixXd h_new = (1.0 - zg.array()).matrix().cwiseProduct(n) + zg.cwiseProduct(h);
        MatrixXd out = (p.head_w * h_new).colwise() + p.head_b;
        if (stats) stats->steps += m;
        if (trace) {
            trace->last.push_back(last);
            trace->x.push_back(std::move(x));
            trace->r.push_back(std::move(r));
            trace->zg.push_back(std::move(zg));
            trace->n.push_back(std::move(n));
            trace->h_prev.push_back(h);
            trace->u_n.push_back(std::move(u_n));
            trace->out.push_back(out);
        }
        h = std::move(h_new);
        last = out;
        outputs.push_back(std::move(out));
    }
    if (stats) stats->cells += m;
    return outputs;
}

MatrixXd predict_dc(const ModelParams& p, const MatrixXd& z) {
    return (p.dc_w * z).colwise() + p.dc_b;
}

MatrixXd predict_backward(const ModelParams& p, const PredictTrace& trace,
                          const std::vector<MatrixXd>& d_out, const MatrixXd& d_dc, ModelParams& grads) {
    const int cw = p.dims.cell;
    const Eigen::Index m = trace.z.cols();
    require(static_cast<int>(d_out.size()) == trace.steps, "predict_backward: d_out size mismatch");

    MatrixXd d_h_next = MatrixXd::Zero(cw, m);
    MatrixXd d_last_next = MatrixXd::Zero(p.dims.out_width(), m);
    for (int s = trace.steps - 1; s >= 0; --s) {
        const MatrixXd d_out_s = d_out[s] + d_last_next;
        const MatrixXd h_cur = (1.0 - trace.zg[s].array()).matrix().cwiseProduct(trace.n[s]) +
                               trace.zg[s].cwiseProduct(trace.h_prev[s]);
        grads.head_w += d_out_s * h_cur.transpose();
        grads.head_b += d_out_s.rowwise().sum();
        MatrixXd d_h = p.head_w.transpose() * d_out_s + d_h_next;

        const MatrixXd& r = trace.r[s];
        const MatrixXd& zg = trace.zg[s];
        const MatrixXd& n = trace.n[s];
        const MatrixXd& h_prev = trace.h_prev[s];
        const MatrixXd& u_n = trace.u_n[s];

        MatrixXd dn = d_h.cwiseProduct((1.0 - zg.array()).matrix());
        MatrixXd dzg = d_h.cwiseProduct(h_prev - n);
        MatrixXd d_h_prev = d_h.cwiseProduct(zg);
        MatrixXd da_n = dn.cwiseProduct((1.0 - n.array().square()).matrix());
        MatrixXd dr = da_n.cwiseProduct(u_n);
        MatrixXd du_n = da_n.cwiseProduct(r);
        MatrixXd da_r = dr.cwiseProduct(r).cwiseProduct((1.0 - r.array()).matrix());
        MatrixXd da_z = dzg.cwiseProduct(zg).cwiseProduct((1.0 - zg.array()).matrix());

        MatrixXd da(3 * cw, m);
        da.middleRows(0, cw) = da_r;
        da.middleRows(cw, cw) = da_z;
        da.middleRows(2 * cw, cw) = da_n;
        MatrixXd duh(3 * cw, m);
        duh.middleRows(0, cw) = da_r;
        duh.middleRows(cw, cw) = da_z;
        duh.middleRows(2 * cw, cw) = du_n;

        grads.gru_w += da * trace.x[s].transpose();
        grads.gru_b += da.rowwise().sum();
        grads.gru_u += duh * h_prev.transpose();
        d_h_prev += p.gru_u.transpose() * duh;
        MatrixXd dx = p.gru_w.transpose() * da;

        grads.embed_w += dx * trace.last[s].transpose();
        grads.embed_b += dx.rowwise().sum();
        d_last_next = p.embed_w.transpose() * dx;
        d_h_next = std::move(d_h_prev);
    }
    grads.init_w += d_h_next * trace.z.transpose();
    grads.init_b += d_h_next.rowwise().sum();
    MatrixXd d_z = p.init_w.transpose() * d_h_next;

    grads.dc_w += d_dc * trace.z.transpose();
    grads.dc_b += d_dc.rowwise().sum();
    d_z += p.dc_w.transpose() * d_dc;
    return d_z;
}

fourier::ComponentSet collect_components(const std::vector<MatrixXd>& outputs, const MatrixXd& dc, int m,
                                         int T, int K) {
    fourier::ComponentSet set;
    set.dc = {dc(0, m), dc(1, m), dc(2, m)};
    set.components.reserve(T);
    for (const MatrixXd& out : outputs) {
        for (int k = 0; k < K; ++k) {
            if (static_cast<int>(set.components.size()) >= T) return set;
            fourier::FourierComponent c;
            c.freq = {out(8 * k + 0, m), out(8 * k + 1, m)};
            c.amp_cos = {out(8 * k + 2, m), out(8 * k + 3, m), out(8 * k + 4, m)};
            c.amp_sin = {out(8 * k + 5, m), out(8 * k + 6, m), out(8 * k + 7, m)};
            set.components.push_back(c);
        }
    }
    return set;
}

// ---- query pipeline ----

CellRef locate_cell(const Vec2& coord, int h, int w) {
    CellRef ref;
    const int dims[2] = {h, w};
    int idx[2];
    for (int a = 0; a < 2; ++a) {
        require(coord[a] >= -1.0 - kCoordEps && coord[a] <= 1.0 + kCoordEps,
                "locate_cell: coordinate outside [-1,1]");
        const double u = (coord[a] + 1.0) * 0.5 * dims[a];
        double fl = std::floor(u);
        int i = static_cast<int>(fl);
        if (u == fl && i > 0) --i;  // boundary tie toward the lower-index cell
        idx[a] = std::clamp(i, 0, dims[a] - 1);
    }
    ref.iy = idx[0];
    ref.ix = idx[1];
    const Vec2 center = datapipe::cell_center(ref.iy, ref.ix, h, w);
    // scale so one cell spans [-1,1] per axis
    ref.delta = {(coord[0] - center[0]) * h, (coord[1] - center[1]) * w};
    return ref;
}

namespace {

// per-unique-cell component sets for a coordinate list
struct CellBatch {
    std::vector<int> cell_of_query;
    std::vector<fourier::ComponentSet> sets;
};

CellBatch predict_cells(const ModelParams& p, const LatentGrid& grid, const std::vector<Vec2>& coords,
                        int predict_T, int keep_T, bool truncate, PredictStats* stats,
                        std::vector<Vec2>& deltas) {
    CellBatch batch;
    batch.cell_of_query.resize(coords.size());
    deltas.resize(coords.size());
    std::unordered_map<int, int> col_of_cell;
    std::vector<int> cell_keys;
    for (size_t q = 0; q < coords.size(); ++q) {
        const CellRef ref = locate_cell(coords[q], grid.h, grid.w);
        deltas[q] = ref.delta;
        const int key = ref.iy * grid.w + ref.ix;
        auto [it, inserted] = col_of_cell.try_emplace(key, static_cast<int>(cell_keys.size()));
        if (inserted) cell_keys.push_back(key);
        batch.cell_of_query[q] = it->second;
    }
    MatrixXd z(grid.D, static_cast<Eigen::Index>(cell_keys.size()));
    for (size_t c = 0; c < cell_keys.size(); ++c) z.col(c) = grid.codes.col(cell_keys[c]);

    const auto outputs = predict_batch(p, z, predict_T, nullptr, stats);
    const MatrixXd dc = predict_dc(p, z);
    batch.sets.reserve(cell_keys.size());
    for (size_t c = 0; c < cell_keys.size(); ++c) {
        fourier::ComponentSet set = collect_components(outputs, dc, static_cast<int>(c), predict_T, p.dims.K);
        if (truncate) set = fourier::truncate_top_t(set, keep_T);
        batch.sets.push_back(std::move(set));
    }
    return batch;
}

}  // namespace

std::vector<Vec3> query_rgb(const ModelParams& p, const LatentGrid& grid, const std::vector<Vec2>& coords,
                            const CQConfig& cq, PredictStats* stats) {
    cq.validate();
    require(cq.K == p.dims.K, "query_rgb: CQConfig.K does not match model K");
    std::vector<Vec2> deltas;
    const CellBatch batch = predict_cells(p, grid, coords, cq.T, cq.T, false, stats, deltas);
    std::vector<Vec3> out(coords.size());
    for (size_t q = 0; q < coords.size(); ++q)
        out[q] = fourier::reconstruct_rgb(batch.sets[batch.cell_of_query[q]], deltas[q]);
    return out;
}

namespace {

Image assemble(const std::vector<Vec3>& rgb, int out_h, int out_w) {
    Image img(out_h, out_w);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(y, x, c) = std::clamp(rgb[static_cast<size_t>(y) * out_w + x][c], 0.0, 1.0);
    return img;
}

}  // namespace

Image super_resolve(const ModelParams& p, const Image& lr, int out_h, int out_w, const CQConfig& cq,
                    PredictStats* stats) {
    require(out_h > 0 && out_w > 0, "super_resolve: zero-sized output");
    require(out_h >= lr.h && out_w >= lr.w, "super_resolve: output smaller than input");
    const LatentGrid grid = encode(p, lr);
    const auto coords = datapipe::coord_grid(out_h, out_w);
    return assemble(query_rgb(p, grid, coords, cq, stats), out_h, out_w);
}

Image super_resolve_truncated(const ModelParams& p, const Image& lr, int out_h, int out_w, int t,
                              PredictStats* stats) {
    require(out_h > 0 && out_w > 0, "super_resolve_truncated: zero-sized output");
    require(out_h >= lr.h && out_w >= lr.w, "super_resolve_truncated: output smaller than input");
    require(t >= 0 && t <= p.dims.T_max, "super_resolve_truncated: T outside [0, T_max]");
    const LatentGrid grid = encode(p, lr);
    const auto coords = datapipe::coord_grid(out_h, out_w);
    std::vector<Vec2> deltas;
    const CellBatch batch = predict_cells(p, grid, coords, p.dims.T_max, t, true, stats, deltas);
    std::vector<Vec3> rgb(coords.size());
    for (size_t q = 0; q < coords.size(); ++q)
        rgb[q] = fourier::reconstruct_rgb(batch.sets[batch.cell_of_query[q]], deltas[q]);
    return assemble(rgb, out_h, out_w);
}

}  // namespace cqsr::model
