#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cqsr/checkpoint.hpp"
#include "cqsr/config.hpp"
#include "cqsr/corpus.hpp"
#include "cqsr/eval.hpp"
#include "cqsr/panel.hpp"
#include "cqsr/training.hpp"

namespace {

using namespace cqsr;

std::atomic<bool> g_cancel{false};

void on_signal(int) { g_cancel.store(true); }

const std::set<std::string> kTrainKeys = {
    "data.dir",          "out.dir",
    "train.seed",        "train.epochs",       "train.steps_per_epoch", "train.batch_size",
    "train.n_queries",   "train.w_f",          "train.K",               "train.T_max",
    "train.lr_init",     "train.epoch_half",   "train.abs_alignment",   "train.deterministic",
    "train.clip_norm",   "train.fixed_T",
    "model.D",           "model.blocks",       "model.cell",            "model.embed",
};

uint64_t file_digest(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string bytes = ss.str();
    return checkpoint::fnv1a(bytes.data(), bytes.size());
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<std::pair<double, double>> parse_scale_list(const std::string& s) {
    // "2,4" -> isotropic scales; "2x1.5,4x4" -> anisotropic pairs
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) {
            const double v = std::stod(item);
            out.emplace_back(v, v);
        } else {
            out.emplace_back(std::stod(item.substr(0, x)), std::stod(item.substr(x + 1)));
        }
    }
    return out;
}

int cmd_train(const std::string& config_path, long seed_override, bool deterministic) {
    auto cfg = config::RunConfig::from_file(config_path, kTrainKeys);
    if (seed_override >= 0) cfg.set("train.seed", std::to_string(seed_override));
    if (deterministic) cfg.set("train.deterministic", "true");

    training::TrainConfig tc;
    tc.seed = static_cast<uint64_t>(cfg.get_int("train.seed", 0));
    tc.epochs = static_cast<int>(cfg.get_int("train.epochs", 10));
    tc.steps_per_epoch = static_cast<int>(cfg.get_int("train.steps_per_epoch", 50));
    tc.batch_size = static_cast<int>(cfg.get_int("train.batch_size", 16));
    tc.n_queries = static_cast<int>(cfg.get_int("train.n_queries", 256));
    tc.w_f = cfg.get_real("train.w_f", 1e-3);
    tc.K = static_cast<int>(cfg.get_int("train.K", 2));
    tc.T_max = static_cast<int>(cfg.get_int("train.T_max", 16));
    tc.lr_init = cfg.get_real("train.lr_init", 1e-4);
    tc.epoch_half = static_cast<int>(cfg.get_int("train.epoch_half", -1));
    tc.abs_alignment = cfg.get_bool("train.abs_alignment", false);
    tc.deterministic = cfg.get_bool("train.deterministic", false);
    tc.clip_norm = cfg.get_real("train.clip_norm", 1.0);
    tc.fixed_T = cfg.get_bool("train.fixed_T", false);
    tc.encoder_D = static_cast<int>(cfg.get_int("model.D", 16));
    tc.encoder_blocks = static_cast<int>(cfg.get_int("model.blocks", 2));
    tc.cell_width = static_cast<int>(cfg.get_int("model.cell", 64));
    tc.embed_width = static_cast<int>(cfg.get_int("model.embed", 32));
    tc.validate();

    const std::filesystem::path data_dir = cfg.get_str("data.dir", "data/corpus");
    const std::filesystem::path out_dir = cfg.get_str("out.dir", "out");
    std::filesystem::create_directories(out_dir);
    const auto ckpt_path = out_dir / "model.ckpt";
    const auto csv_path = out_dir / "loss.csv";

    datapipe::ImageDataset dataset(data_dir);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    auto result = training::fit(tc, dataset, ckpt_path, nullptr, &g_cancel);
    training::write_history_csv(csv_path, result.history);

    // refresh the manifest with the loss-history digest
    auto loaded = checkpoint::load(ckpt_path);
    loaded.manifest.loss_digest = file_digest(csv_path);
    checkpoint::save(ckpt_path, loaded.params, loaded.manifest);

    cfg.write_resolved(out_dir / "config_resolved.cfg",
                       {{"run.checkpoint", ckpt_path.string()}, {"run.epochs_done", std::to_string(result.epochs_done)}});
    std::cout << "checkpoint: " << ckpt_path.string() << "\n";
    std::cout << "loss_csv: " << csv_path.string() << "\n";
    if (g_cancel.load()) {
        std::cout << "interrupted: checkpoint saved cleanly\n";
        return 0;
    }
    return 0;
}

int cmd_sweep(const std::string& ckpt_path, const std::string& data_dir, const std::string& t_list_arg,
              const std::string& scales_arg, const std::string& out_csv, bool baseline, bool plot) {
    auto loaded = checkpoint::load(ckpt_path);
    if (baseline && !loaded.manifest.fixed_T)
        throw std::invalid_argument("--baseline requires a checkpoint trained with fixed T (train.fixed_T=true)");

    std::vector<int> t_list =
        t_list_arg.empty() ? eval::default_T_list(loaded.manifest.dims.T_max) : parse_int_list(t_list_arg);
    for (int t : t_list)
        if (t < 1 || t > loaded.manifest.dims.T_max)
            throw std::invalid_argument("T=" + std::to_string(t) + " exceeds checkpoint T_max=" +
                                        std::to_string(loaded.manifest.dims.T_max));
    const auto scales = scales_arg.empty() ? std::vector<std::pair<double, double>>{{2, 2}, {4, 4}}
                                           : parse_scale_list(scales_arg);

    datapipe::ImageDataset dataset(data_dir);
    const auto records = baseline
                             ? eval::baseline_truncation_eval(loaded.params, dataset, t_list, scales)
                             : eval::cq_sweep(loaded.params, dataset, t_list, scales);
    eval::write_sweep_csv(out_csv, records);

    std::ofstream side(out_csv + ".cfg", std::ios::trunc | std::ios::binary);
    side << "checkpoint = " << ckpt_path << "\n"
         << "checkpoint_digest = " << file_digest(ckpt_path) << "\n"
         << "data.dir = " << data_dir << "\n"
         << "baseline = " << (baseline ? "true" : "false") << "\n";

    if (plot) {
        panel::ScatterSeries series;
        for (const auto& r : records) {
            series.x.push_back(r.wall_ms);
            series.y.push_back(r.psnr_db);
        }
        png::write(out_csv + ".png", panel::scatter_plot({series}));
    }
    std::cout << "sweep_csv: " << out_csv << " (" << records.size() << " rows)\n";
    return 0;
}

int cmd_infer(const std::string& ckpt_path, const std::string& input_png, int out_h, int out_w, int t,
              const std::string& out_png) {
    auto loaded = checkpoint::load(ckpt_path);
    if (t < 1 || t > loaded.manifest.dims.T_max)
        throw std::invalid_argument("T must lie in [1, " + std::to_string(loaded.manifest.dims.T_max) + "]");
    const Image lr = png::read(input_png);
    model::CQConfig cq{loaded.manifest.dims.K, loaded.manifest.dims.T_max, t};
    model::PredictStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    const Image sr = model::super_resolve(loaded.params, lr, out_h, out_w, cq, &stats);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    png::write(out_png, sr);
    std::cout << "output: " << out_png << "\n";
    std::printf("wall_ms: %.3f\n", ms);
    std::cout << "steps_per_cell: " << (stats.cells ? stats.steps / stats.cells : 0) << "\n";
    return 0;
}

int cmd_profile(const std::vector<std::string>& ckpt_paths, const std::string& k_list_arg, int t, int repeats,
                const std::string& out_csv, bool plot) {
    std::vector<checkpoint::Loaded> loaded;
    for (const auto& p : ckpt_paths) loaded.push_back(checkpoint::load(p));
    require(!loaded.empty(), "profile: at least one checkpoint required");

    // extra K values reuse the first checkpoint's widths with fresh weights so
    // that timing compares matched cells
    std::vector<model::ModelParams> extra;
    if (!k_list_arg.empty()) {
        for (int k : parse_int_list(k_list_arg)) {
            bool have = false;
            for (const auto& l : loaded)
                if (l.manifest.dims.K == k) have = true;
            if (have) continue;
            model::ModelDims dims = loaded.front().manifest.dims;
            dims.K = k;
            extra.push_back(model::init_params(dims, loaded.front().manifest.seed));
        }
    }
    std::vector<const model::ModelParams*> models;
    for (const auto& l : loaded) models.push_back(&l.params);
    for (const auto& p : extra) models.push_back(&p);
    std::sort(models.begin(), models.end(),
              [](const auto* a, const auto* b) { return a->dims.K < b->dims.K; });

    if (t < 0) t = loaded.front().manifest.dims.T_max;
    const auto stats = eval::runtime_profile(models, t, repeats);
    eval::write_profile_csv(out_csv, stats, t);
    for (const auto& s : stats) {
        std::printf("K=%d steps=%ld median_ms=%.4f iqr_ms=%.4f%s\n", s.K, s.steps_per_call, s.median_ms,
                    s.iqr_ms, s.reliable ? "" : " (unreliable: timer resolution)");
    }
    if (plot) {
        panel::ScatterSeries series;
        for (const auto& s : stats) {
            series.x.push_back(s.median_ms);
            series.y.push_back(static_cast<double>(s.K));
        }
        png::write(out_csv + ".png", panel::scatter_plot({series}));
    }
    std::cout << "profile_csv: " << out_csv << "\n";
    return 0;
}

int cmd_spectrum(const std::string& input_png, const std::string& rect_arg, const std::string& out_png) {
    const Image img = png::read(input_png);
    std::optional<panel::Rect> rect;
    if (!rect_arg.empty()) {
        const auto vals = parse_int_list(rect_arg);
        require(vals.size() == 4, "--rect expects y,x,h,w");
        rect = panel::Rect{vals[0], vals[1], vals[2], vals[3]};
    }
    png::write(out_png, panel::spectrum_panel(img, rect));

    const Plane raw = fourier::amplitude_spectrum_raw(eval::rgb_to_y(rect ? [&] {
        Image p(rect->h, rect->w);
        for (int y = 0; y < rect->h; ++y)
            for (int x = 0; x < rect->w; ++x)
                for (int c = 0; c < 3; ++c) p.at(y, x, c) = img.at(rect->y + y, rect->x + x, c);
        return p;
    }() : img));
    const auto aniso = panel::spectrum_anisotropy(raw);
    if (aniso)
        std::printf("anisotropy_ratio: %.4f\n", *aniso);
    else
        std::cout << "anisotropy_ratio: undefined (no off-center energy)\n";
    std::cout << "panel: " << out_png << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cost-and-quality controllable arbitrary-scale super-resolution"};
    app.require_subcommand(1);

    std::string config_path, ckpt, data_dir, t_list, scales, out_path, k_list, rect, input_png;
    std::vector<std::string> ckpts;
    long seed = -1;
    bool deterministic = false, baseline = false, plot = false;
    int out_h = 0, out_w = 0, t_arg = -1, repeats = 100;

    auto* train = app.add_subcommand("train", "train a model from a config file");
    train->add_option("--config", config_path, "key=value config file")->required();
    train->add_option("--seed", seed, "override train.seed");
    train->add_flag("--deterministic", deterministic, "force deterministic single-threaded execution");

    auto* sweep = app.add_subcommand("sweep", "PSNR / runtime sweep over component budgets");
    sweep->add_option("--checkpoint", ckpt, "trained checkpoint")->required();
    sweep->add_option("--data", data_dir, "directory of PNG images")->required();
    sweep->add_option("--T", t_list, "comma-separated component budgets (default scaled from T_max)");
    sweep->add_option("--scales", scales, "comma-separated scales, e.g. 2,4 or 2x1.5");
    sweep->add_option("--out", out_path, "output CSV path")->default_val("sweep.csv");
    sweep->add_flag("--baseline", baseline, "top-T truncation baseline (fixed-T checkpoint required)");
    sweep->add_flag("--plot", plot, "emit a PSNR-vs-runtime PNG next to the CSV");

    auto* infer = app.add_subcommand("infer", "super-resolve one PNG");
    infer->add_option("--checkpoint", ckpt, "trained checkpoint")->required();
    infer->add_option("--input", input_png, "input PNG")->required();
    infer->add_option("--out-h", out_h, "output height")->required();
    infer->add_option("--out-w", out_w, "output width")->required();
    infer->add_option("--T", t_arg, "component budget")->required();
    infer->add_option("--out", out_path, "output PNG")->default_val("sr.png");

    auto* profile = app.add_subcommand("profile", "predictor-only runtime profile per K");
    profile->add_option("--checkpoint", ckpts, "checkpoint(s), one per K")->required();
    profile->add_option("--K", k_list, "additional K values (fresh weights, matched widths)");
    profile->add_option("--T", t_arg, "component budget (default: T_max)");
    profile->add_option("--repeats", repeats, "timing repeats (>= 10)")->default_val(100);
    profile->add_option("--out", out_path, "output CSV path")->default_val("profile.csv");
    profile->add_flag("--plot", plot, "emit a runtime plot next to the CSV");

    auto* spectrum = app.add_subcommand("spectrum", "image / amplitude-spectrum panel");
    spectrum->add_option("--input", input_png, "input PNG")->required();
    spectrum->add_option("--rect", rect, "patch rectangle y,x,h,w");
    spectrum->add_option("--out", out_path, "output PNG")->default_val("spectrum.png");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(config_path, seed, deterministic);
        if (sweep->parsed()) return cmd_sweep(ckpt, data_dir, t_list, scales, out_path, baseline, plot);
        if (infer->parsed()) return cmd_infer(ckpt, input_png, out_h, out_w, t_arg, out_path);
        if (profile->parsed()) return cmd_profile(ckpts, k_list, t_arg, repeats, out_path, plot);
        if (spectrum->parsed()) return cmd_spectrum(input_png, rect, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
