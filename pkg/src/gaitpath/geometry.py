"""Planar homography estimation and perspective correction.

Frames shot from a raised camera suffer vertical perspective distortion that
grows with the elevation angle.  A 3x3 projective mapping estimated from four
point correspondences (DLT with Hartley point normalization) warps the frame
onto the undistorted vertical plane before segmentation.  Elevation angles of
60 degrees or more are rejected as uncorrectable; below 5 degrees distortion
is negligible and no correction is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateQuad,
    IoFailure,
    PointAtInfinity,
    SingularSystem,
    UncorrectableElevation,
)

MAX_ELEVATION_DEG = 60.0
MIN_CORRECTABLE_ELEVATION_DEG = 5.0
PRESET_MATCH_TOLERANCE_DEG = 5.0

_W_EPS = 1e-12
_DET_EPS = 1e-12


def _quad_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.shape != (4, 2):
        raise ValueError(f"expected 4 (x, y) points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("quad contains non-finite coordinates")
    return pts


def _check_no_collinear_triple(pts: np.ndarray, name: str) -> None:
    # Degeneracy scale: triangle area relative to the quad's bounding-box area.
    span = pts.max(axis=0) - pts.min(axis=0)
    bbox_area = span[0] * span[1]
    if bbox_area <= 0.0:
        raise DegenerateQuad(f"{name} quad collapses to a line or point")
    idx = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for a, b, c in idx:
        v1 = pts[b] - pts[a]
        v2 = pts[c] - pts[a]
        area = 0.5 * abs(v1[0] * v2[1] - v1[1] * v2[0])
        if area <= 1e-9 * bbox_area:
            raise DegenerateQuad(
                f"{name} quad has collinear points ({a}, {b}, {c})"
            )


def _hartley_normalization(pts: np.ndarray) -> np.ndarray:
    """Similarity transform taking the points to centroid 0, mean distance sqrt(2)."""
    centroid = pts.mean(axis=0)
    dists = np.linalg.norm(pts - centroid, axis=1)
    mean_dist = dists.mean()
    scale = np.sqrt(2.0) / mean_dist if mean_dist > 0 else 1.0
    return np.array(
        [
            [scale, 0.0, -scale * centroid[0]],
            [0.0, scale, -scale * centroid[1]],
            [0.0, 0.0, 1.0],
        ]
    )


def normalize_homography(H: np.ndarray) -> np.ndarray:
    """Canonical scale: unit Frobenius norm, first nonzero entry positive."""
    H = np.asarray(H, dtype=float)
    norm = np.linalg.norm(H)
    if norm == 0.0 or not np.isfinite(norm):
        raise SingularSystem("cannot normalize a zero or non-finite matrix")
    H = H / norm
    flat = H.ravel()
    nz = np.nonzero(np.abs(flat) > 1e-14)[0]
    if nz.size and flat[nz[0]] < 0:
        H = -H
    if abs(np.linalg.det(H)) <= _DET_EPS:
        raise SingularSystem("homography is singular after normalization")
    return H


def estimate_homography(src, dst) -> np.ndarray:
    """Estimate the 3x3 projective map taking the src quad onto the dst quad.

    Uses the four-point direct linear transform on Hartley-normalized
    coordinates.  The result is in canonical scale (see normalize_homography).
    """
    src = _quad_array(src)
    dst = _quad_array(dst)
    _check_no_collinear_triple(src, "source")
    _check_no_collinear_triple(dst, "target")

    Ts = _hartley_normalization(src)
    Td = _hartley_normalization(dst)
    src_h = np.column_stack([src, np.ones(4)]) @ Ts.T
    dst_h = np.column_stack([dst, np.ones(4)]) @ Td.T

    A = np.zeros((8, 9))
    for i in range(4):
        x, y = src_h[i, 0], src_h[i, 1]
        u, v = dst_h[i, 0], dst_h[i, 1]
        A[2 * i] = [-x, -y, -1, 0, 0, 0, u * x, u * y, u]
        A[2 * i + 1] = [0, 0, 0, -x, -y, -1, v * x, v * y, v]

    _, s, vt = np.linalg.svd(A)
    if s[0] == 0.0 or s[7] / s[0] < 1e-12:
        raise SingularSystem("DLT design matrix is rank-deficient")
    Hn = vt[-1].reshape(3, 3)
    H = np.linalg.inv(Td) @ Hn @ Ts
    return normalize_homography(H)


def apply_homography(H: np.ndarray, point) -> tuple[float, float]:
    """Map a pixel point through H and dehomogenize."""
    x, y = float(point[0]), float(point[1])
    p = H @ np.array([x, y, 1.0])
    if abs(p[2]) < _W_EPS:
        raise PointAtInfinity(f"point ({x}, {y}) maps to infinity")
    return (p[0] / p[2], p[1] / p[2])


def warp_image(img: np.ndarray, H: np.ndarray, out_width: int, out_height: int) -> np.ndarray:
    """Warp a grayscale image through H by inverse mapping.

    Output pixels are sampled with bilinear interpolation; samples outside the
    source raster read as 0.
    """
    if out_width < 1 or out_height < 1:
        raise ValueError("output dimensions must be >= 1")
    img = np.asarray(img, dtype=float)
    h, w = img.shape
    try:
        Hinv = np.linalg.inv(H)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("homography is not invertible") from exc

    xs, ys = np.meshgrid(np.arange(out_width, dtype=float),
                         np.arange(out_height, dtype=float))
    ones = np.ones_like(xs)
    src = np.einsum("ij,jhw->ihw", Hinv, np.stack([xs, ys, ones]))
    wz = src[2]
    valid = np.abs(wz) > _W_EPS
    sx = np.where(valid, src[0] / np.where(valid, wz, 1.0), -1.0)
    sy = np.where(valid, src[1] / np.where(valid, wz, 1.0), -1.0)

    x0 = np.floor(sx).astype(int)
    y0 = np.floor(sy).astype(int)
    fx = sx - x0
    fy = sy - y0

    out = np.zeros((out_height, out_width), dtype=float)
    for dy in (0, 1):
        for dx in (0, 1):
            xi = x0 + dx
            yi = y0 + dy
            inside = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h) & valid
            weight = (fx if dx else 1.0 - fx) * (fy if dy else 1.0 - fy)
            vals = np.zeros_like(out)
            vals[inside] = img[yi[inside], xi[inside]]
            out += weight * vals * inside
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class ElevationPreset:
    """A pre-annotated correction for one camera elevation angle."""

    phi: float
    source_quad: np.ndarray
    target_quad: np.ndarray
    matrix: np.ndarray

    @classmethod
    def from_quads(cls, phi: float, source_quad, target_quad) -> "ElevationPreset":
        if not (0.0 <= phi < MAX_ELEVATION_DEG):
            raise ValueError(f"preset elevation {phi} out of [0, 60) range")
        src = _quad_array(source_quad)
        dst = _quad_array(target_quad)
        H = estimate_homography(src, dst)
        return cls(phi=phi, source_quad=src, target_quad=dst, matrix=H)


def preset_for_elevation(phi: float, presets) -> ElevationPreset | None:
    """Pick the preset nearest to the query elevation.

    Returns None below 5 degrees (distortion negligible) or when no preset is
    within 5 degrees of the query.  Raises UncorrectableElevation at >= 60.
    """
    if phi < 0:
        raise ValueError("elevation angle must be non-negative")
    if phi >= MAX_ELEVATION_DEG:
        raise UncorrectableElevation(
            f"elevation {phi} deg >= {MAX_ELEVATION_DEG} deg cannot be corrected"
        )
    if phi < MIN_CORRECTABLE_ELEVATION_DEG:
        return None
    best = None
    best_gap = PRESET_MATCH_TOLERANCE_DEG
    for preset in presets:
        gap = abs(preset.phi - phi)
        if gap <= best_gap:
            best = preset
            best_gap = gap
    return best


def load_presets(path) -> list[ElevationPreset]:
    """Parse the preset file: `phi x1 y1 ... x4 y4 | u1 v1 ... u4 v4` per line."""
    presets = []
    try:
        with open(path, "r", encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    left, right = line.split("|")
                    head = [float(tok) for tok in left.split()]
                    tail = [float(tok) for tok in right.split()]
                    if len(head) != 9 or len(tail) != 8:
                        raise ValueError("wrong field count")
                    phi = head[0]
                    src = np.array(head[1:]).reshape(4, 2)
                    dst = np.array(tail).reshape(4, 2)
                except ValueError as exc:
                    raise IoFailure(f"{path}:{lineno}: malformed preset line") from exc
                presets.append(ElevationPreset.from_quads(phi, src, dst))
    except OSError as exc:
        raise IoFailure(f"cannot read preset file {path}") from exc
    return presets


def save_presets(path, presets) -> None:
    try:
        with open(path, "w", encoding="ascii") as fh:
            for p in presets:
                src = " ".join(f"{v:.17g}" for v in p.source_quad.ravel())
                dst = " ".join(f"{v:.17g}" for v in p.target_quad.ravel())
                fh.write(f"{p.phi:.17g} {src} | {dst}\n")
    except OSError as exc:
        raise IoFailure(f"cannot write preset file {path}") from exc
