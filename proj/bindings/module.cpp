#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqsr/checkpoint.hpp"
#include "cqsr/datapipe.hpp"
#include "cqsr/eval.hpp"
#include "cqsr/fourier.hpp"
#include "cqsr/model.hpp"

namespace py = pybind11;
using namespace cqsr;

namespace {

Image image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    require(arr.ndim() == 3 && arr.shape(2) == 3, "expected an (H, W, 3) float array");
    Image img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
    return img;
}

py::array_t<double> array_from_image(const Image& img) {
    py::array_t<double> out({img.h, img.w, 3});
    std::copy(img.data.begin(), img.data.end(), out.mutable_data());
    return out;
}

py::array_t<double> array_from_plane(const Plane& p) {
    py::array_t<double> out({p.h, p.w});
    std::copy(p.data.begin(), p.data.end(), out.mutable_data());
    return out;
}

Plane plane_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    require(arr.ndim() == 2, "expected an (H, W) float array");
    Plane p(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + arr.size(), p.data.begin());
    return p;
}

// components as an (N, 8) array: freq(2), amp_cos(3), amp_sin(3)
fourier::ComponentSet set_from_arrays(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& comps,
    const std::array<double, 3>& dc) {
    require(comps.ndim() == 2 && comps.shape(1) == 8, "expected an (N, 8) component array");
    fourier::ComponentSet set;
    set.dc = {dc[0], dc[1], dc[2]};
    for (py::ssize_t i = 0; i < comps.shape(0); ++i) {
        const double* row = comps.data() + i * 8;
        fourier::FourierComponent c;
        c.freq = {row[0], row[1]};
        c.amp_cos = {row[2], row[3], row[4]};
        c.amp_sin = {row[5], row[6], row[7]};
        set.components.push_back(c);
    }
    return set;
}

py::array_t<double> arrays_from_set(const fourier::ComponentSet& set) {
    py::array_t<double> out({static_cast<py::ssize_t>(set.components.size()), py::ssize_t(8)});
    double* p = out.mutable_data();
    for (const auto& c : set.components) {
        *p++ = c.freq[0];
        *p++ = c.freq[1];
        for (int i = 0; i < 3; ++i) *p++ = c.amp_cos[i];
        for (int i = 0; i < 3; ++i) *p++ = c.amp_sin[i];
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_cqsr, m) {
    m.doc() = "cost-quality controllable super-resolution core";

    m.def(
        "reconstruct",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& comps,
           const std::array<double, 3>& dc,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& offsets) {
            require(offsets.ndim() == 2 && offsets.shape(1) == 2, "expected an (N, 2) offset array");
            const auto set = set_from_arrays(comps, dc);
            std::vector<Vec2> offs(offsets.shape(0));
            for (py::ssize_t i = 0; i < offsets.shape(0); ++i)
                offs[i] = {offsets.data()[i * 2], offsets.data()[i * 2 + 1]};
            const auto rgb = fourier::reconstruct_batch(set, offs);
            py::array_t<double> out({static_cast<py::ssize_t>(rgb.size()), py::ssize_t(3)});
            for (size_t i = 0; i < rgb.size(); ++i)
                for (int c = 0; c < 3; ++c) out.mutable_data()[i * 3 + c] = rgb[i][c];
            return out;
        },
        py::arg("components"), py::arg("dc"), py::arg("offsets"));

    m.def(
        "truncate_top_t",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& comps,
           const std::array<double, 3>& dc, int t) {
            return arrays_from_set(fourier::truncate_top_t(set_from_arrays(comps, dc), t));
        },
        py::arg("components"), py::arg("dc"), py::arg("t"));

    m.def(
        "alignment_loss",
        [](const std::vector<std::vector<std::array<double, 2>>>& groups, bool use_abs) {
            std::vector<fourier::FrequencyGroup> gs;
            for (const auto& g : groups) {
                fourier::FrequencyGroup fg;
                for (const auto& f : g) fg.freqs.push_back({f[0], f[1]});
                gs.push_back(std::move(fg));
            }
            return fourier::alignment_loss(gs, use_abs);
        },
        py::arg("groups"), py::arg("use_abs") = false);

    m.def(
        "amplitude_spectrum",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& plane) {
            return array_from_plane(fourier::amplitude_spectrum(plane_from_array(plane)));
        },
        py::arg("image"));

    m.def(
        "bicubic_resize",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, int out_h, int out_w) {
            return array_from_image(datapipe::bicubic_resize(image_from_array(img), out_h, out_w));
        },
        py::arg("image"), py::arg("out_h"), py::arg("out_w"));

    m.def(
        "coord_grid",
        [](int h, int w) {
            const auto grid = datapipe::coord_grid(h, w);
            py::array_t<double> out({h, w, 2});
            for (size_t i = 0; i < grid.size(); ++i) {
                out.mutable_data()[i * 2] = grid[i][0];
                out.mutable_data()[i * 2 + 1] = grid[i][1];
            }
            return out;
        },
        py::arg("h"), py::arg("w"));

    m.def(
        "rgb_to_y",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
            return array_from_plane(eval::rgb_to_y(image_from_array(img)));
        },
        py::arg("image"));

    m.def(
        "psnr_y",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& sr,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& hr, int border) {
            return eval::psnr_y(image_from_array(sr), image_from_array(hr), border);
        },
        py::arg("sr"), py::arg("hr"), py::arg("border") = 0);

    py::class_<model::ModelParams>(m, "Model")
        .def_property_readonly("K", [](const model::ModelParams& p) { return p.dims.K; })
        .def_property_readonly("T_max", [](const model::ModelParams& p) { return p.dims.T_max; })
        .def(
            "super_resolve",
            [](const model::ModelParams& p,
               const py::array_t<double, py::array::c_style | py::array::forcecast>& lr, int out_h,
               int out_w, int T) {
                model::CQConfig cq{p.dims.K, p.dims.T_max, T};
                return array_from_image(model::super_resolve(p, image_from_array(lr), out_h, out_w, cq));
            },
            py::arg("lr"), py::arg("out_h"), py::arg("out_w"), py::arg("T"));

    m.def(
        "load_checkpoint",
        [](const std::string& path) { return checkpoint::load(path).params; },
        py::arg("path"));

    m.def(
        "init_model",
        [](int D, int blocks, int cell, int embed, int K, int T_max, uint64_t seed) {
            return model::init_params(model::ModelDims{D, blocks, cell, embed, K, T_max}, seed);
        },
        py::arg("D") = 16, py::arg("blocks") = 2, py::arg("cell") = 64, py::arg("embed") = 32,
        py::arg("K") = 2, py::arg("T_max") = 16, py::arg("seed") = 0);
}
