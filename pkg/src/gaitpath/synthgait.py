"""Deterministic synthetic walker: training corpus and walk-sequence oracle.

An articulated figure is projected orthographically at a chosen azimuth
(viewpoint sector center plus jitter) and elevation, rasterized as filled
capsules, optionally corrupted with salt-and-pepper and boundary noise, and
pushed through the regular silhouette normalization path.  Everything is a
pure function of the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .body import BodyModel, default_body
from .segmentation import largest_blob_bbox, normalize_silhouette, remove_small_blobs
from .states import StateLabel, cyc_add, cyc_sub

JITTER_LIMIT_DEG = 22.5

CANVAS_WIDTH = 160
CANVAS_HEIGHT = 224
PIXELS_PER_UNIT = 100.0
GROUND_MARGIN_PX = 16
MIN_BLOB_PIXELS = 32


@dataclass(frozen=True)
class RenderSpec:
    pose: int
    viewpoint: int
    orientation_jitter: float = 0.0
    elevation: float = 0.0
    noise_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (1 <= self.pose <= 8 and 1 <= self.viewpoint <= 8):
            raise ValueError("pose and viewpoint must be in 1..8")
        if abs(self.orientation_jitter) > JITTER_LIMIT_DEG:
            raise ValueError(
                f"orientation jitter must stay within +-{JITTER_LIMIT_DEG} degrees"
            )
        if not 0.0 <= self.noise_level <= 1.0:
            raise ValueError("noise_level must be in [0, 1]")


@dataclass(frozen=True)
class WalkSpec:
    path_kind: str = "straight"  # straight | circle | figure8
    frames_per_pose: int = 3
    cycles: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.path_kind not in ("straight", "circle", "figure8"):
            raise ValueError(f"unknown path kind {self.path_kind!r}")
        if self.frames_per_pose < 1 or self.cycles < 1:
            raise ValueError("frames_per_pose and cycles must be >= 1")


def _pixel_grid():
    # pixel centers symmetric about the canvas midline, in body units
    cols = (np.arange(CANVAS_WIDTH) - (CANVAS_WIDTH - 1) / 2.0) / PIXELS_PER_UNIT
    rows = ((CANVAS_HEIGHT - 1 - GROUND_MARGIN_PX) - np.arange(CANVAS_HEIGHT)) / PIXELS_PER_UNIT
    return np.meshgrid(cols, rows)


_PX, _PY = _pixel_grid()


def _trig(angle_deg: float) -> tuple[float, float]:
    # snap near-zero trig values so cardinal azimuths mirror exactly
    rad = math.radians(angle_deg)
    c, s = math.cos(rad), math.sin(rad)
    if abs(c) < 1e-15:
        c = 0.0
    elif abs(abs(c) - 1.0) < 1e-15:
        c = math.copysign(1.0, c)
    if abs(s) < 1e-15:
        s = 0.0
    elif abs(abs(s) - 1.0) < 1e-15:
        s = math.copysign(1.0, s)
    return c, s


def _project(joint: np.ndarray, azimuth_deg: float, elevation_deg: float):
    """Orthographic projection after azimuth (vertical axis) and elevation tilt."""
    ca, sa = _trig(azimuth_deg)
    ce, se = _trig(elevation_deg)
    x, y, z = joint
    xr = x * ca + z * sa
    zr = -x * sa + z * ca
    yr = y * ce + zr * se
    return xr, yr


def render_raw(spec: RenderSpec, body: BodyModel | None = None) -> np.ndarray:
    """Rasterize the figure on the raw canvas, noise included."""
    body = body or default_body()
    azimuth = (spec.viewpoint - 1) * 45.0 + spec.orientation_jitter
    mask = np.zeros((CANVAS_HEIGHT, CANVAS_WIDTH), dtype=bool)
    for start, end, radius in body.capsules(spec.pose):
        ax, ay = _project(start, azimuth, spec.elevation)
        bx, by = _project(end, azimuth, spec.elevation)
        dx, dy = bx - ax, by - ay
        seg_sq = dx * dx + dy * dy
        if seg_sq > 0.0:
            t = np.clip(((_PX - ax) * dx + (_PY - ay) * dy) / seg_sq, 0.0, 1.0)
        else:
            t = 0.0
        cx = ax + t * dx
        cy = ay + t * dy
        dist_sq = (_PX - cx) ** 2 + (_PY - cy) ** 2
        mask |= dist_sq <= radius * radius

    if spec.noise_level > 0.0:
        mask = _apply_noise(mask, spec.noise_level, spec.seed)
    return mask


def _apply_noise(mask: np.ndarray, level: float, seed: int) -> np.ndarray:
    """Salt-and-pepper flips plus erosion/dilation jitter on the boundary."""
    rng = np.random.default_rng(seed)
    r = rng.random(mask.shape)
    noisy = mask.copy()
    noisy[r < level / 2.0] = True
    noisy[r > 1.0 - level / 2.0] = False

    inner = mask & ~ndimage.binary_erosion(mask)
    outer = ndimage.binary_dilation(mask) & ~mask
    flip = rng.random(mask.shape) < level
    noisy[inner & flip] = False
    noisy[outer & flip] = True
    return noisy


def render_silhouette(spec: RenderSpec, body: BodyModel | None = None) -> np.ndarray:
    """Normalized 96x160 silhouette of the figure."""
    raw = render_raw(spec, body)
    cleaned = remove_small_blobs(raw, MIN_BLOB_PIXELS)
    box = largest_blob_bbox(cleaned)
    return normalize_silhouette(cleaned, box)


def generate_dataset(n_per_class: int, noise: float = 0.0, seed: int = 0,
                     body: BodyModel | None = None):
    """Balanced corpus: n_per_class silhouettes for each of the 64 classes.

    Orientation jitter is drawn uniformly from +-22.5 degrees.  Returns
    (silhouettes, labels) with silhouettes stacked as a (n, 160, 96) array.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    body = body or default_body()
    silhouettes = []
    labels = []
    for pose in range(1, 9):
        for view in range(1, 9):
            for k in range(n_per_class):
                rng = np.random.default_rng([seed, pose, view, k])
                jitter = rng.uniform(-JITTER_LIMIT_DEG, JITTER_LIMIT_DEG)
                sub_seed = int(rng.integers(0, 2**31))
                spec = RenderSpec(pose=pose, viewpoint=view,
                                  orientation_jitter=jitter,
                                  noise_level=noise, seed=sub_seed)
                silhouettes.append(render_silhouette(spec, body))
                labels.append(StateLabel(pose, view))
    return np.stack(silhouettes), labels


def walk_schedule(spec: WalkSpec, start_view: int = 3) -> list[StateLabel]:
    """Ground-truth state sequence for a walk.

    The pose advances every frames_per_pose frames through the cyclic gait.
    Straight walks keep the viewpoint; circle walks turn right (viewpoint
    decrement) once per gait cycle; figure-8 walks alternate 8 left-turn
    cycles with 8 right-turn cycles.
    """
    states = []
    view = start_view
    for cycle in range(spec.cycles):
        if cycle > 0:
            if spec.path_kind == "circle":
                view = cyc_sub(view, 1)
            elif spec.path_kind == "figure8":
                if (cycle - 1) % 16 < 8:
                    view = cyc_add(view, 1)
                else:
                    view = cyc_sub(view, 1)
        for pose in range(1, 9):
            states.extend([StateLabel(pose, view)] * spec.frames_per_pose)
    return states


def generate_walk(spec: WalkSpec, body: BodyModel | None = None,
                  noise_level: float = 0.0, start_view: int = 3,
                  elevation: float = 0.0, raw: bool = False):
    """Render a walk: (frames, truth).

    Frames are normalized silhouettes, or raw canvas masks when raw=True
    (useful for writing frame files that still need segmentation).
    """
    body = body or default_body()
    truth = walk_schedule(spec, start_view=start_view)
    frames = []
    for index, state in enumerate(truth):
        rng = np.random.default_rng([spec.seed, index])
        jitter = rng.uniform(-JITTER_LIMIT_DEG, JITTER_LIMIT_DEG)
        sub_seed = int(rng.integers(0, 2**31))
        rspec = RenderSpec(pose=state.pose, viewpoint=state.viewpoint,
                           orientation_jitter=jitter, elevation=elevation,
                           noise_level=noise_level, seed=sub_seed)
        frames.append(render_raw(rspec, body) if raw else render_silhouette(rspec, body))
    return frames, truth
