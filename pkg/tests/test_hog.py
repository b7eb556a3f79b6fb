"""HOG descriptor tests with a scalar reference implementation as oracle."""

import numpy as np
import pytest

from gaitpath import hog
from gaitpath.errors import IoFailure
from gaitpath.hog import DEFAULT_PARAMS, HOG_DIM, HogParams


def reference_cell_histograms(gx, gy, params):
    """Straightforward per-pixel loop implementing the voting rule."""
    hist = np.zeros((params.cells_y, params.cells_x, params.bins))
    bin_width = 180.0 / params.bins
    for r in range(params.height):
        for c in range(params.width):
            mag = np.hypot(gx[r, c], gy[r, c])
            ang = np.degrees(np.arctan2(gy[r, c], gx[r, c])) % 180.0
            t = ang / bin_width - 0.5
            lo = int(np.floor(t))
            frac = t - lo
            cell = (r // params.cell_size, c // params.cell_size)
            hist[cell][lo % params.bins] += mag * (1.0 - frac)
            hist[cell][(lo + 1) % params.bins] += mag * frac
    return hist


def random_silhouette(rng):
    s = np.zeros((160, 96), dtype=bool)
    r0, c0 = rng.integers(10, 60), rng.integers(10, 40)
    s[r0:r0 + rng.integers(40, 90), c0:c0 + rng.integers(20, 50)] = True
    s ^= rng.random(s.shape) < 0.02
    return s


def test_dimension_constant():
    assert HOG_DIM == 32292
    assert DEFAULT_PARAMS.blocks_x == 23
    assert DEFAULT_PARAMS.blocks_y == 39


def test_rejects_wrong_shape():
    with pytest.raises(ValueError):
        hog.extract(np.zeros((100, 96), dtype=bool))


def test_gradients_centered_and_one_sided():
    ramp = np.tile(np.arange(96, dtype=float) ** 2, (160, 1))
    gx, gy = hog.compute_gradients(ramp)
    # interior: centered difference f[i+1] - f[i-1]
    assert gx[0, 5] == ramp[0, 6] - ramp[0, 4]
    # borders: one-sided
    assert gx[0, 0] == ramp[0, 1] - ramp[0, 0]
    assert gx[0, -1] == ramp[0, -1] - ramp[0, -2]
    assert np.all(gy == 0)


def test_cell_histograms_match_reference():
    rng = np.random.default_rng(41)
    s = random_silhouette(rng)
    gx, gy = hog.compute_gradients(s)
    fast = hog.cell_histograms(gx, gy)
    slow = reference_cell_histograms(gx, gy, DEFAULT_PARAMS)
    assert np.allclose(fast, slow, atol=1e-10)


def test_single_vote_lands_in_expected_bins():
    # One pixel with gradient at exactly 10 degrees: all mass in bin 0.
    gx = np.zeros((160, 96))
    gy = np.zeros((160, 96))
    gx[0, 0] = np.cos(np.radians(10.0))
    gy[0, 0] = np.sin(np.radians(10.0))
    h = hog.cell_histograms(gx, gy)
    assert np.isclose(h[0, 0, 0], 1.0)
    assert np.isclose(h.sum(), 1.0)
    # At 20 degrees the vote splits evenly between bins 0 and 1.
    gx[0, 0] = np.cos(np.radians(20.0))
    gy[0, 0] = np.sin(np.radians(20.0))
    h = hog.cell_histograms(gx, gy)
    assert np.isclose(h[0, 0, 0], 0.5)
    assert np.isclose(h[0, 0, 1], 0.5)


def test_block_normalization_bounds():
    rng = np.random.default_rng(43)
    v = hog.extract(random_silhouette(rng))
    assert v.shape == (HOG_DIM,)
    assert v.min() >= 0.0
    assert v.max() <= 1.0
    blocks = v.reshape(-1, 36)
    norms = np.linalg.norm(blocks, axis=1)
    nonzero = norms > 1e-9
    assert np.allclose(norms[nonzero], 1.0, atol=1e-9)


def test_empty_silhouette_gives_zero_vector():
    v = hog.extract(np.zeros((160, 96), dtype=bool))
    assert np.all(v == 0.0)


def test_mirror_produces_permuted_descriptor():
    # Mirroring flips gradient x-signs; unsigned orientation theta -> 180-theta,
    # so per-cell histograms reverse their bin order up to the bin offset, and
    # blocks reflect horizontally.  The descriptor is a permutation.
    rng = np.random.default_rng(47)
    s = random_silhouette(rng)
    v = hog.extract(s)
    vm = hog.extract(s[:, ::-1])
    assert np.isclose(np.linalg.norm(v), np.linalg.norm(vm), atol=1e-9)
    assert np.allclose(np.sort(v), np.sort(vm), atol=1e-9)
    assert not np.allclose(v, vm)  # but not equal: orientation matters


def test_extract_is_deterministic():
    rng = np.random.default_rng(53)
    s = random_silhouette(rng)
    assert np.array_equal(hog.extract(s), hog.extract(s))


def test_custom_params_dim():
    p = HogParams(cell_size=8, width=96, height=160)
    # 12x20 cells -> 11x19 blocks of 36
    assert p.dim == 11 * 19 * 36


def test_feature_dump_round_trip(tmp_path):
    rng = np.random.default_rng(59)
    feats = rng.random((5, 64)).astype(np.float32)
    path = tmp_path / "f.hogv"
    hog.write_features(path, feats)
    assert np.array_equal(hog.read_features(path), feats)


def test_feature_dump_bad_magic(tmp_path):
    path = tmp_path / "f.hogv"
    path.write_bytes(b"NOPE" + b"\x00" * 16)
    with pytest.raises(IoFailure):
        hog.read_features(path)
