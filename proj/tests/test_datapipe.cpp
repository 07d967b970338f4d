#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "cqsr/corpus.hpp"
#include "cqsr/datapipe.hpp"

using namespace cqsr;
using namespace cqsr::datapipe;

namespace {

// direct per-pixel Keys kernel summation, separable, clamp edges
double keys_oracle(double x) {
    x = std::abs(x);
    const double a = -0.5;
    if (x < 1.0) return (a + 2.0) * x * x * x - (a + 3.0) * x * x + 1.0;
    if (x < 2.0) return a * x * x * x - 5.0 * a * x * x + 8.0 * a * x - 4.0 * a;
    return 0.0;
}

Image bicubic_oracle(const Image& img, int oh, int ow) {
    Image out(oh, ow);
    for (int y = 0; y < oh; ++y) {
        const double sy = (y + 0.5) * img.h / oh - 0.5;
        for (int x = 0; x < ow; ++x) {
            const double sx = (x + 0.5) * img.w / ow - 0.5;
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int ky = -1; ky <= 2; ++ky)
                    for (int kx = -1; kx <= 2; ++kx) {
                        const int iy = std::clamp(static_cast<int>(std::floor(sy)) + ky, 0, img.h - 1);
                        const int ix = std::clamp(static_cast<int>(std::floor(sx)) + kx, 0, img.w - 1);
                        acc += keys_oracle(sy - (std::floor(sy) + ky)) * keys_oracle(sx - (std::floor(sx) + kx)) *
                               img.at(iy, ix, c);
                    }
                out.at(y, x, c) = std::clamp(acc, 0.0, 1.0);
            }
        }
    }
    return out;
}

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("cqsr_dp_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("coord_grid closed forms") {
    const auto one = coord_grid(1, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0][0] == doctest::Approx(0.0));
    CHECK(one[0][1] == doctest::Approx(0.0));

    const auto two = coord_grid(2, 1);
    CHECK(two[0][0] == doctest::Approx(-0.5));
    CHECK(two[1][0] == doctest::Approx(0.5));
}

TEST_CASE("coord_grid spacing and symmetry over random sizes") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(1, 1024);
    for (int trial = 0; trial < 25; ++trial) {
        const int h = dim(rng), w = dim(rng);
        const auto grid = coord_grid(h, w);
        REQUIRE(grid.size() == static_cast<size_t>(h) * w);
        CHECK(grid.front()[0] == doctest::Approx(-(1.0 - 1.0 / h)).epsilon(1e-12));
        CHECK(grid.back()[0] == doctest::Approx(1.0 - 1.0 / h).epsilon(1e-12));
        CHECK(grid.front()[1] == doctest::Approx(-(1.0 - 1.0 / w)).epsilon(1e-12));
        CHECK(grid.back()[1] == doctest::Approx(1.0 - 1.0 / w).epsilon(1e-12));
        if (w >= 2) CHECK(grid[1][1] - grid[0][1] == doctest::Approx(2.0 / w).epsilon(1e-12));
        if (h >= 2) CHECK(grid[w][0] - grid[0][0] == doctest::Approx(2.0 / h).epsilon(1e-12));
        // centers symmetric under negation
        for (int i = 0; i < h; ++i)
            CHECK(grid[static_cast<size_t>(i) * w][0] ==
                  doctest::Approx(-grid[static_cast<size_t>(h - 1 - i) * w][0]).epsilon(1e-12));
    }
}

TEST_CASE("bicubic_resize preserves constants and the identity size") {
    Image img(10, 7, 0.6180339887);
    const Image up = bicubic_resize(img, 23, 17);
    for (double v : up.data) CHECK(v == doctest::Approx(0.6180339887).epsilon(1e-6));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Image noise(9, 9);
    for (auto& v : noise.data) v = u(rng);
    const Image same = bicubic_resize(noise, 9, 9);
    for (size_t i = 0; i < noise.data.size(); ++i) CHECK(same.data[i] == doctest::Approx(noise.data[i]).epsilon(1e-6));
}

TEST_CASE("bicubic_resize reproduces interior linear ramps") {
    Image ramp(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            for (int c = 0; c < 3; ++c) ramp.at(y, x, c) = (0.2 + 0.5 * x / 31.0 + 0.2 * y / 31.0);
    const Image out = bicubic_resize(ramp, 48, 48);
    for (int y = 4; y < 44; ++y)
        for (int x = 4; x < 44; ++x) {
            const double sx = (x + 0.5) * 32.0 / 48.0 - 0.5;
            const double sy = (y + 0.5) * 32.0 / 48.0 - 0.5;
            const double want = 0.2 + 0.5 * sx / 31.0 + 0.2 * sy / 31.0;
            CHECK(out.at(y, x, 0) == doctest::Approx(want).epsilon(1e-3));
        }
}

TEST_CASE("bicubic_resize matches the naive separable oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Image img(8, 8);
    for (auto& v : img.data) v = u(rng);
    const Image got = bicubic_resize(img, 4, 4);
    const Image want = bicubic_oracle(img, 4, 4);
    for (size_t i = 0; i < got.data.size(); ++i) CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-6));

    CHECK_THROWS_AS(bicubic_resize(img, 0, 4), std::invalid_argument);
}

TEST_CASE("sample_scale_pair support, mean and independence") {
    Rng rng(99);
    double sum_y = 0.0, sum_x = 0.0, sum_xy = 0.0, sq_y = 0.0, sq_x = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        auto [sy, sx] = sample_scale_pair(rng);
        CHECK(sy >= 1.0);
        CHECK(sy <= 4.0);
        CHECK(sx >= 1.0);
        CHECK(sx <= 4.0);
        sum_y += sy;
        sum_x += sx;
        sum_xy += sy * sx;
        sq_y += sy * sy;
        sq_x += sx * sx;
    }
    const double my = sum_y / n, mx = sum_x / n;
    CHECK(std::abs(my - 2.5) < 0.05);
    CHECK(std::abs(mx - 2.5) < 0.05);
    const double cov = sum_xy / n - my * mx;
    const double r = cov / std::sqrt((sq_y / n - my * my) * (sq_x / n - mx * mx));
    CHECK(std::abs(r) < 0.05);
}

TEST_CASE("make_training_sample contracts") {
    const Image hr = corpus::texture_image(220, 220);
    Rng rng(7);
    auto [pair, queries] = make_training_sample(hr, rng);

    CHECK(pair.lr.h == 48);
    CHECK(pair.lr.w == 48);
    CHECK(pair.hr.h >= 48);
    CHECK(pair.hr.h == std::max(48, static_cast<int>(std::lround(48 * pair.s_y))));
    CHECK(pair.hr.w == std::max(48, static_cast<int>(std::lround(48 * pair.s_x))));
    REQUIRE(queries.size() == 256);

    // queries are distinct, lie on coord_grid centers, and round-trip to the HR pixel
    std::set<std::pair<long, long>> seen;
    for (const auto& q : queries) {
        const double iy = ((q.coord[0] + 1.0) * pair.hr.h - 1.0) / 2.0;
        const double ix = ((q.coord[1] + 1.0) * pair.hr.w - 1.0) / 2.0;
        const long i = std::lround(iy), j = std::lround(ix);
        CHECK(std::abs(iy - i) < 1e-9);
        CHECK(std::abs(ix - j) < 1e-9);
        CHECK(seen.insert({i, j}).second);
        const Vec3 px = pair.hr.pixel(static_cast<int>(i), static_cast<int>(j));
        for (int c = 0; c < 3; ++c) CHECK(q.target_rgb[c] == px[c]);
    }
}

TEST_CASE("make_training_sample rejects a too-small image after rescale attempts") {
    const Image tiny = corpus::gradient_image(16, 16);
    Rng rng(1);
    CHECK_THROWS_AS(make_training_sample(tiny, rng), std::invalid_argument);
}

TEST_CASE("same seed gives a byte-identical sample stream") {
    const Image hr = corpus::gradient_image(220, 220);
    Rng a(123), b(123);
    for (int i = 0; i < 3; ++i) {
        auto [pa, qa] = make_training_sample(hr, a);
        auto [pb, qb] = make_training_sample(hr, b);
        CHECK(pa.lr.data == pb.lr.data);
        CHECK(pa.hr.data == pb.hr.data);
        REQUIRE(qa.size() == qb.size());
        for (size_t q = 0; q < qa.size(); ++q) {
            CHECK(qa[q].coord == qb[q].coord);
            CHECK(qa[q].target_rgb == qb[q].target_rgb);
        }
    }
}

TEST_CASE("ImageDataset: lexicographic order, 8-bit mapping, determinism") {
    const auto dir = temp_dir("dataset");
    corpus::write_desk_corpus(dir);
    // one extra file that is not a valid PNG gets skipped with a warning
    std::ofstream(dir / "broken.png") << "not a png";

    ImageDataset ds(dir);
    REQUIRE(ds.size() == 3);
    CHECK(ds.path(0).filename() == "edges.png");
    CHECK(ds.path(1).filename() == "gradient.png");
    CHECK(ds.path(2).filename() == "texture.png");

    // pixel value 255 decodes to exactly 1.0
    Image white(4, 4, 1.0);
    png::write(dir / "zz_white.png", white);
    ImageDataset ds2(dir);
    REQUIRE(ds2.size() == 4);
    const Image& loaded = ds2.get(3);
    for (double v : loaded.data) CHECK(v == 1.0);

    const Image& a = ds2.get(1);
    ImageDataset ds3(dir);
    const Image& b = ds3.get(1);
    CHECK(a.data == b.data);

    CHECK_THROWS_AS(ImageDataset(temp_dir("empty")), std::invalid_argument);
}

TEST_CASE("png round-trip preserves 8-bit content") {
    const auto dir = temp_dir("png");
    const Image img = corpus::edges_image(32, 32);
    png::write(dir / "a.png", img);
    const Image back = png::read(dir / "a.png");
    REQUIRE(back.h == 32);
    REQUIRE(back.w == 32);
    for (size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5 / 255.0 + 1e-12);
}
