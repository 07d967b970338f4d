#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqsr/checkpoint.hpp"
#include "cqsr/config.hpp"
#include "cqsr/corpus.hpp"
#include "cqsr/datapipe.hpp"

using namespace cqsr;

namespace {

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("cqsr_cf_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

const std::set<std::string> kKeys{"train.seed", "train.epochs", "train.lr", "data.dir", "eval.deterministic"};

}  // namespace

TEST_CASE("config: sections, comments, whitespace, typed getters") {
    const auto dir = temp_dir("cfg");
    const auto path = write_text(dir / "run.cfg",
                                 "# top comment\n"
                                 "[train]\n"
                                 "seed = 7\n"
                                 "epochs=3   # trailing comment\n"
                                 "lr = 2.5e-4\n"
                                 "\n"
                                 "[data]\n"
                                 "dir = /tmp/imgs\n"
                                 "[eval]\n"
                                 "deterministic = true\n");
    auto cfg = config::RunConfig::from_file(path, kKeys);
    CHECK(cfg.get_int("train.seed", 0) == 7);
    CHECK(cfg.get_int("train.epochs", 0) == 3);
    CHECK(cfg.get_real("train.lr", 0.0) == doctest::Approx(2.5e-4));
    CHECK(cfg.get_str("data.dir", "") == "/tmp/imgs");
    CHECK(cfg.get_bool("eval.deterministic", false) == true);
    // defaults flow through untouched keys
    CHECK(cfg.get_int("train.missing_is_not_known", 42) == 42);
}

TEST_CASE("config: unknown keys are rejected with the key name") {
    const auto dir = temp_dir("cfg_bad");
    const auto path = write_text(dir / "bad.cfg", "[train]\nseeed = 7\n");
    try {
        config::RunConfig::from_file(path, kKeys);
        FAIL("expected a throw");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("train.seeed") != std::string::npos);
    }
}

TEST_CASE("config: environment variables override file values") {
    const auto dir = temp_dir("cfg_env");
    const auto path = write_text(dir / "run.cfg", "[train]\nseed = 7\n");
    setenv("CQSR_TRAIN_SEED", "99", 1);
    auto cfg = config::RunConfig::from_file(path, kKeys);
    unsetenv("CQSR_TRAIN_SEED");
    CHECK(cfg.get_int("train.seed", 0) == 99);
}

TEST_CASE("config: resolved sidecar lists every consulted key") {
    const auto dir = temp_dir("cfg_res");
    const auto path = write_text(dir / "run.cfg", "[train]\nseed = 7\n");
    auto cfg = config::RunConfig::from_file(path, kKeys);
    cfg.get_int("train.seed", 0);
    cfg.get_int("train.epochs", 10);
    cfg.write_resolved(dir / "resolved.cfg", {{"checkpoint.digest", "abc"}});

    const std::string text = slurp(dir / "resolved.cfg");
    CHECK(text.find("train.seed = 7") != std::string::npos);
    CHECK(text.find("train.epochs = 10") != std::string::npos);
    CHECK(text.find("checkpoint.digest = abc") != std::string::npos);
}

TEST_CASE("checkpoint: save -> load -> save is byte-identical") {
    const auto dir = temp_dir("ckpt");
    model::ModelDims dims;
    dims.D = 6;
    dims.blocks = 1;
    dims.cell = 10;
    dims.embed = 7;
    dims.K = 2;
    dims.T_max = 8;
    const auto params = model::init_params(dims, 123);

    checkpoint::Manifest manifest;
    manifest.dims = dims;
    manifest.seed = 123;
    manifest.epoch = 4;
    manifest.loss_digest = 0xdeadbeefull;
    manifest.fixed_T = true;
    manifest.w_f = 2e-3;

    checkpoint::save(dir / "a.ckpt", params, manifest);
    const auto loaded = checkpoint::load(dir / "a.ckpt");
    CHECK(loaded.manifest.dims == dims);
    CHECK(loaded.manifest.seed == 123);
    CHECK(loaded.manifest.epoch == 4);
    CHECK(loaded.manifest.loss_digest == 0xdeadbeefull);
    CHECK(loaded.manifest.fixed_T == true);
    CHECK(loaded.manifest.w_f == doctest::Approx(2e-3));
    CHECK(loaded.manifest.cell_realization == "gru");

    checkpoint::save(dir / "b.ckpt", loaded.params, loaded.manifest);
    CHECK(slurp(dir / "a.ckpt") == slurp(dir / "b.ckpt"));

    // loaded values are the float32 rounding of the originals
    auto pv = params.views();
    auto lv = loaded.params.views();
    REQUIRE(pv.size() == lv.size());
    for (size_t g = 0; g < pv.size(); ++g) {
        CHECK(pv[g].name == lv[g].name);
        REQUIRE(pv[g].size == lv[g].size);
        for (Eigen::Index i = 0; i < pv[g].size; ++i)
            CHECK(lv[g].data[i] == static_cast<double>(static_cast<float>(pv[g].data[i])));
    }
}

TEST_CASE("checkpoint: corrupted magic and truncated files are rejected") {
    const auto dir = temp_dir("ckpt_bad");
    model::ModelDims dims;
    dims.D = 6;
    dims.blocks = 1;
    dims.cell = 10;
    dims.embed = 7;
    const auto params = model::init_params(dims, 1);
    checkpoint::Manifest manifest;
    manifest.dims = dims;
    checkpoint::save(dir / "good.ckpt", params, manifest);

    std::string bytes = slurp(dir / "good.ckpt");
    bytes[0] = 'X';
    write_text(dir / "badmagic.ckpt", bytes);
    CHECK_THROWS(checkpoint::load(dir / "badmagic.ckpt"));

    write_text(dir / "trunc.ckpt", slurp(dir / "good.ckpt").substr(0, 64));
    CHECK_THROWS(checkpoint::load(dir / "trunc.ckpt"));

    CHECK_THROWS(checkpoint::load(dir / "missing.ckpt"));
}

TEST_CASE("fnv1a matches published test vectors") {
    // 64-bit FNV-1a reference values
    CHECK(checkpoint::fnv1a("", 0) == 0xcbf29ce484222325ull);
    CHECK(checkpoint::fnv1a("a", 1) == 0xaf63dc4c8601ec8cull);
    CHECK(checkpoint::fnv1a("foobar", 6) == 0x85944171f73967e8ull);
}

TEST_CASE("corpus writer produces a loadable three-image dataset") {
    const auto dir = temp_dir("corpus");
    corpus::write_desk_corpus(dir);
    datapipe::ImageDataset ds(dir);
    REQUIRE(ds.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        const Image& img = ds.get(i);
        CHECK(img.h >= 96);
        CHECK(img.w >= 96);
        CHECK(img.finite());
        double lo = 1.0, hi = 0.0;
        for (double v : img.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo >= 0.0);
        CHECK(hi <= 1.0);
        CHECK(hi - lo > 0.1);  // not a constant image
    }
}
