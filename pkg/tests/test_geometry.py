"""Homography estimation, warping and elevation-preset selection."""

import numpy as np
import pytest

from gaitpath import geometry
from gaitpath.errors import (
    DegenerateQuad,
    PointAtInfinity,
    SingularSystem,
    UncorrectableElevation,
)

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def random_quad(rng, low=-50.0, high=50.0):
    """A random non-degenerate convex-ish quad: jittered square corners."""
    base = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    scale = rng.uniform(5.0, high)
    jitter = rng.uniform(-0.2, 0.2, size=(4, 2))
    offset = rng.uniform(low, high, size=2)
    return (base + jitter) * scale + offset


def project(H, pts):
    pts = np.asarray(pts, dtype=float)
    hom = np.column_stack([pts, np.ones(len(pts))]) @ H.T
    return hom[:, :2] / hom[:, 2:]


def test_identity_recovery():
    H = geometry.estimate_homography(UNIT_SQUARE, UNIT_SQUARE)
    expected = geometry.normalize_homography(np.eye(3))
    assert np.allclose(H, expected, atol=1e-12)


def test_maps_corners_exactly():
    rng = np.random.default_rng(3)
    for _ in range(50):
        src = random_quad(rng)
        dst = random_quad(rng)
        H = geometry.estimate_homography(src, dst)
        assert np.allclose(project(H, src), dst, atol=1e-7)


def test_recovers_known_matrix():
    rng = np.random.default_rng(11)
    for _ in range(50):
        H_true = np.eye(3) + rng.uniform(-0.2, 0.2, size=(3, 3))
        H_true = geometry.normalize_homography(H_true)
        src = random_quad(rng)
        dst = project(H_true, src)
        H = geometry.estimate_homography(src, dst)
        assert np.max(np.abs(H - H_true)) < 1e-8


def test_normalize_homography_canonical():
    H = geometry.normalize_homography(-3.0 * np.eye(3))
    assert np.isclose(np.linalg.norm(H), 1.0)
    assert H[0, 0] > 0  # first nonzero entry made positive
    with pytest.raises(SingularSystem):
        geometry.normalize_homography(np.zeros((3, 3)))
    with pytest.raises(SingularSystem):
        geometry.normalize_homography(np.diag([1.0, 1.0, 0.0]))


def test_collinear_quad_rejected():
    bad = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 5.0]])
    with pytest.raises(DegenerateQuad):
        geometry.estimate_homography(bad, UNIT_SQUARE)
    with pytest.raises(DegenerateQuad):
        geometry.estimate_homography(UNIT_SQUARE, bad)


def test_apply_homography_point_at_infinity():
    # Bottom row sends y = 1 to the plane at infinity.
    H = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 1.0]])
    assert geometry.apply_homography(H, (3.0, 0.0)) == (3.0, 0.0)
    with pytest.raises(PointAtInfinity):
        geometry.apply_homography(H, (0.0, 1.0))


def test_warp_identity_is_lossless():
    rng = np.random.default_rng(5)
    img = rng.integers(0, 256, size=(40, 30), dtype=np.uint8)
    out = geometry.warp_image(img, np.eye(3), 30, 40)
    assert np.array_equal(out, img)


def test_warp_translation():
    img = np.zeros((20, 20), dtype=np.uint8)
    img[5, 7] = 200
    H = np.array([[1.0, 0.0, 3.0], [0.0, 1.0, 2.0], [0.0, 0.0, 1.0]])
    out = geometry.warp_image(img, H, 20, 20)
    assert out[7, 10] == 200


def test_warp_round_trip_low_error():
    rng = np.random.default_rng(9)
    # Smooth image so bilinear resampling loses little.
    h, w = 60, 50
    ys, xs = np.mgrid[0:h, 0:w]
    img = np.clip(np.rint(127.5 + 100.0 * np.cos(xs / 10.0) * np.cos(ys / 13.0)),
                  0, 255).astype(np.uint8)
    src = np.array([[0, 0], [w - 1.0, 0], [w - 1.0, h - 1.0], [0, h - 1.0]])
    dst = src + rng.uniform(-3, 3, size=(4, 2))
    H = geometry.estimate_homography(src, dst)
    fwd = geometry.warp_image(img, H, w, h)
    back = geometry.warp_image(fwd, np.linalg.inv(H), w, h)
    interior = (slice(8, h - 8), slice(8, w - 8))
    err = np.abs(back[interior].astype(float) - img[interior].astype(float))
    assert err.mean() < 2.0


def test_preset_selection_rules():
    presets = [
        geometry.ElevationPreset.from_quads(p, UNIT_SQUARE * 10,
                                            random_quad(np.random.default_rng(i)))
        for i, p in enumerate((18.4, 33.7, 45.0, 53.1))
    ]
    assert geometry.preset_for_elevation(2.0, presets) is None
    assert geometry.preset_for_elevation(20.0, presets).phi == 18.4
    assert geometry.preset_for_elevation(44.0, presets).phi == 45.0
    assert geometry.preset_for_elevation(12.0, presets) is None  # nothing within 5 deg
    with pytest.raises(UncorrectableElevation):
        geometry.preset_for_elevation(60.0, presets)
    with pytest.raises(ValueError):
        geometry.preset_for_elevation(-1.0, presets)


def test_preset_file_round_trip(tmp_path):
    rng = np.random.default_rng(21)
    presets = [geometry.ElevationPreset.from_quads(p, random_quad(rng), random_quad(rng))
               for p in (18.4, 45.0)]
    path = tmp_path / "presets.txt"
    geometry.save_presets(path, presets)
    loaded = geometry.load_presets(path)
    assert len(loaded) == 2
    for a, b in zip(presets, loaded):
        assert a.phi == b.phi
        assert np.allclose(a.matrix, b.matrix, atol=1e-9)
