"""Dense HOG descriptor of a 96x160 silhouette.

Geometry: 4x4-pixel cells, 9 unsigned orientation bins over [0, 180), 2x2-cell
blocks at 1-cell stride, L2-Hys block normalization.  That yields
(24-1) x (40-1) blocks of 36 values = 32292 features per silhouette.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import IoFailure
from .segmentation import SILHOUETTE_HEIGHT, SILHOUETTE_WIDTH

_NORM_EPS = 1e-10


@dataclass(frozen=True)
class HogParams:
    cell_size: int = 4
    block_cells: int = 2
    block_stride: int = 1
    bins: int = 9
    l2hys_clip: float = 0.2
    width: int = SILHOUETTE_WIDTH
    height: int = SILHOUETTE_HEIGHT

    cells_x: int = field(init=False)
    cells_y: int = field(init=False)
    blocks_x: int = field(init=False)
    blocks_y: int = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        if self.width % self.cell_size or self.height % self.cell_size:
            raise ValueError("image dimensions must be multiples of the cell size")
        cx = self.width // self.cell_size
        cy = self.height // self.cell_size
        bx = (cx - self.block_cells) // self.block_stride + 1
        by = (cy - self.block_cells) // self.block_stride + 1
        object.__setattr__(self, "cells_x", cx)
        object.__setattr__(self, "cells_y", cy)
        object.__setattr__(self, "blocks_x", bx)
        object.__setattr__(self, "blocks_y", by)
        object.__setattr__(self, "dim", bx * by * self.block_cells ** 2 * self.bins)


DEFAULT_PARAMS = HogParams()
HOG_DIM = DEFAULT_PARAMS.dim
assert HOG_DIM == 23 * 39 * 36 == 32292


def _check_shape(s: np.ndarray, params: HogParams) -> np.ndarray:
    s = np.asarray(s)
    if s.shape != (params.height, params.width):
        raise ValueError(
            f"expected {params.width}x{params.height} silhouette, got shape {s.shape}"
        )
    return s.astype(float)


def compute_gradients(s: np.ndarray, params: HogParams = DEFAULT_PARAMS):
    """Centered differences on the 0/1 raster; one-sided at the borders."""
    f = _check_shape(s, params)
    gx = np.empty_like(f)
    gy = np.empty_like(f)
    gx[:, 1:-1] = f[:, 2:] - f[:, :-2]
    gx[:, 0] = f[:, 1] - f[:, 0]
    gx[:, -1] = f[:, -1] - f[:, -2]
    gy[1:-1, :] = f[2:, :] - f[:-2, :]
    gy[0, :] = f[1, :] - f[0, :]
    gy[-1, :] = f[-1, :] - f[-2, :]
    return gx, gy


def cell_histograms(gx: np.ndarray, gy: np.ndarray,
                    params: HogParams = DEFAULT_PARAMS) -> np.ndarray:
    """Per-cell 9-bin orientation histograms, shape (cells_y, cells_x, bins).

    Each pixel votes its gradient magnitude into the two bins adjacent to its
    unsigned orientation, split by linear interpolation; bin centers sit at
    10, 30, ..., 170 degrees.
    """
    gx = np.asarray(gx, dtype=float)
    gy = np.asarray(gy, dtype=float)
    mag = np.hypot(gx, gy)
    ang = np.degrees(np.arctan2(gy, gx)) % 180.0

    bin_width = 180.0 / params.bins
    t = ang / bin_width - 0.5          # continuous bin coordinate
    lo = np.floor(t)
    frac = t - lo
    bin_lo = lo.astype(int) % params.bins
    bin_hi = (bin_lo + 1) % params.bins

    cs = params.cell_size
    rows = np.arange(params.height) // cs
    cols = np.arange(params.width) // cs
    cell_idx = rows[:, None] * params.cells_x + cols[None, :]

    hist = np.zeros(params.cells_y * params.cells_x * params.bins)
    flat_lo = cell_idx * params.bins + bin_lo
    flat_hi = cell_idx * params.bins + bin_hi
    np.add.at(hist, flat_lo.ravel(), (mag * (1.0 - frac)).ravel())
    np.add.at(hist, flat_hi.ravel(), (mag * frac).ravel())
    return hist.reshape(params.cells_y, params.cells_x, params.bins)


def extract(s: np.ndarray, params: HogParams = DEFAULT_PARAMS) -> np.ndarray:
    """Full HOG vector: blocks row-major, cells row-major, then bins."""
    gx, gy = compute_gradients(s, params)
    hist = cell_histograms(gx, gy, params)

    bc = params.block_cells
    windows = sliding_window_view(hist, (bc, bc, params.bins))
    # stride over cells, drop the singleton bin window axis
    windows = windows[::params.block_stride, ::params.block_stride, 0]
    blocks = windows.reshape(params.blocks_y * params.blocks_x, bc * bc * params.bins)

    norms = np.linalg.norm(blocks, axis=1, keepdims=True)
    normed = np.where(norms > _NORM_EPS, blocks / np.maximum(norms, _NORM_EPS), 0.0)
    clipped = np.minimum(normed, params.l2hys_clip)
    norms2 = np.linalg.norm(clipped, axis=1, keepdims=True)
    final = np.where(norms2 > _NORM_EPS, clipped / np.maximum(norms2, _NORM_EPS), 0.0)
    return final.reshape(-1)


def extract_batch(silhouettes, params: HogParams = DEFAULT_PARAMS) -> np.ndarray:
    """HOG vectors for a batch, stacked row-wise as float32."""
    return np.stack([extract(s, params).astype(np.float32) for s in silhouettes])


_MAGIC = b"HOGV"


def write_features(path, features: np.ndarray) -> None:
    """Binary feature dump: magic, u32 count, u32 dim, count*dim f32, little-endian."""
    arr = np.ascontiguousarray(features, dtype="<f4")
    if arr.ndim != 2:
        raise ValueError("features must be a 2-D array")
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<II", arr.shape[0], arr.shape[1]))
            fh.write(arr.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write feature dump {path}") from exc


def read_features(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise IoFailure(f"{path}: bad magic {magic!r}")
            count, dim = struct.unpack("<II", fh.read(8))
            data = fh.read(4 * count * dim)
            if len(data) != 4 * count * dim:
                raise IoFailure(f"{path}: truncated feature data")
            return np.frombuffer(data, dtype="<f4").reshape(count, dim)
    except OSError as exc:
        raise IoFailure(f"cannot read feature dump {path}") from exc
