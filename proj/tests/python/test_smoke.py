import math
import os
import sys

import numpy as np
import pytest

mod_dir = os.environ.get("CQSR_MODULE_DIR")
if mod_dir:
    sys.path.insert(0, mod_dir)

cq = pytest.importorskip("_cqsr")


def test_reconstruct_matches_numpy():
    rng = np.random.default_rng(0)
    comps = rng.normal(size=(5, 8))
    dc = (0.1, 0.2, 0.3)
    offsets = rng.uniform(-1.0, 1.0, size=(13, 2))

    got = cq.reconstruct(comps, dc, offsets)

    phase = math.pi * offsets @ comps[:, :2].T  # (13, 5)
    want = np.asarray(dc) + np.cos(phase) @ comps[:, 2:5] + np.sin(phase) @ comps[:, 5:8]
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_truncate_keeps_largest():
    comps = np.zeros((3, 8))
    comps[:, 0] = [1.0, 2.0, 3.0]
    comps[0, 2] = 0.1
    comps[1, 2] = 5.0
    comps[2, 2] = 1.0
    kept = cq.truncate_top_t(comps, (0.0, 0.0, 0.0), 2)
    assert kept.shape == (2, 8)
    assert kept[0, 0] == 2.0  # largest amplitude first
    assert kept[1, 0] == 3.0


def test_alignment_loss_extremes():
    assert cq.alignment_loss([[(1.0, 0.0), (2.0, 0.0)]]) == pytest.approx(-1.0)
    assert cq.alignment_loss([[(1.0, 0.0), (0.0, 1.0)]]) == pytest.approx(0.0, abs=1e-9)
    assert cq.alignment_loss([[(1.0, 0.0), (-1.0, 0.0)]], use_abs=True) == pytest.approx(-1.0)


def test_bicubic_and_psnr():
    rng = np.random.default_rng(1)
    img = rng.uniform(size=(16, 16, 3))
    up = cq.bicubic_resize(img, 32, 24)
    assert up.shape == (32, 24, 3)
    assert np.all(up >= 0.0) and np.all(up <= 1.0)

    flat = np.full((8, 8, 3), 0.5)
    assert cq.psnr_y(flat, flat) == 100.0
    shifted = flat + 0.25
    assert cq.psnr_y(flat, shifted) == pytest.approx(20.0 * math.log10(4.0))


def test_rgb_to_y_weights():
    img = np.zeros((2, 2, 3))
    img[..., 0] = 1.0
    np.testing.assert_allclose(cq.rgb_to_y(img), 0.299)


def test_coord_grid_centers():
    g = cq.coord_grid(2, 2)
    np.testing.assert_allclose(g[0, 0], [-0.5, -0.5])
    np.testing.assert_allclose(g[1, 1], [0.5, 0.5])


def test_amplitude_spectrum_peak():
    h = w = 32
    y, x = np.mgrid[0:h, 0:w]
    img = 0.5 + 0.4 * np.cos(2 * math.pi * 4 * x / w)
    spec = cq.amplitude_spectrum(img)
    assert spec.shape == (h, w)
    # strongest non-DC response sits at horizontal frequency +-4
    spec = spec.copy()
    spec[h // 2, w // 2] = 0.0
    peak = np.unravel_index(np.argmax(spec), spec.shape)
    assert peak[0] == h // 2
    assert abs(peak[1] - w // 2) == 4


def test_model_super_resolve_shapes():
    model = cq.init_model(D=6, blocks=1, cell=10, embed=7, K=2, T_max=8, seed=3)
    assert model.K == 2
    assert model.T_max == 8
    rng = np.random.default_rng(2)
    lr = rng.uniform(size=(8, 8, 3))
    out = model.super_resolve(lr, 16, 12, T=4)
    assert out.shape == (16, 12, 3)
    assert np.all(out >= 0.0) and np.all(out <= 1.0)
