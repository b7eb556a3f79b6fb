"""Frame-to-silhouette conversion.

A frame is denoised, thresholded, cleaned of small blobs, cropped to the
foreground bounding box and rescaled to the fixed 96x160 canvas the classifier
was trained on.  Images are plain 2-D uint8 numpy arrays, masks are 2-D bool
arrays, both row-major (height, width).
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import IoFailure, NonPositiveSigma, NoForeground

SILHOUETTE_WIDTH = 96
SILHOUETTE_HEIGHT = 160

# 8-connectivity: diagonal limb pixels belong to the same blob
_STRUCTURE_8 = np.ones((3, 3), dtype=bool)


def binarize(img: np.ndarray, threshold: int, foreground_is_dark: bool = True) -> np.ndarray:
    """Threshold to a boolean mask.

    Dark foreground sets bits where intensity < threshold, bright foreground
    where intensity >= threshold.
    """
    img = np.asarray(img)
    if foreground_is_dark:
        return img < threshold
    return img >= threshold


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian with kernel radius ceil(3*sigma)."""
    if sigma <= 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_denoise(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication at the borders."""
    kernel = gaussian_kernel(sigma)
    out = np.asarray(img, dtype=float)
    out = ndimage.convolve1d(out, kernel, axis=0, mode="nearest")
    out = ndimage.convolve1d(out, kernel, axis=1, mode="nearest")
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def label_blobs(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected component labeling (labels 1..n, background 0)."""
    labels, count = ndimage.label(mask, structure=_STRUCTURE_8)
    return labels, count


def remove_small_blobs(mask: np.ndarray, min_pixels: int) -> np.ndarray:
    """Clear 8-connected components with area below min_pixels."""
    if min_pixels < 0:
        raise ValueError("min_pixels must be >= 0")
    mask = np.asarray(mask, dtype=bool)
    if min_pixels == 0 or not mask.any():
        return mask.copy()
    labels, count = label_blobs(mask)
    areas = np.bincount(labels.ravel(), minlength=count + 1)
    keep = areas >= min_pixels
    keep[0] = False
    return keep[labels]


def largest_blob_bbox(mask: np.ndarray) -> tuple[int, int, int, int]:
    """Tight (x0, y0, x1, y1) box around all remaining foreground.

    Surviving blobs are treated as one silhouette, so the box spans their
    union.  Coordinates are inclusive-exclusive.
    """
    mask = np.asarray(mask, dtype=bool)
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        raise NoForeground("mask has no foreground pixels")
    return (int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)


def _resize_index_map(n_out: int, n_in: int) -> np.ndarray:
    """Nearest-neighbor sample indices, symmetric under mirroring.

    The plain floor((i + 0.5) * scale) map can pick different neighbors for a
    mask and its mirror when a sample lands exactly on a pixel boundary.  The
    right half is therefore defined as the mirror of the left half, which
    keeps mirrored silhouettes exact mirrors after resizing.
    """
    scale = n_in / n_out
    idx = np.minimum((np.arange(n_out) + 0.5) * scale, n_in - 1).astype(int)
    half = n_out // 2
    idx[n_out - half:] = (n_in - 1) - idx[:half][::-1]
    return idx


def resize_mask_nearest(mask: np.ndarray, out_width: int, out_height: int) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    ri = _resize_index_map(out_height, h)
    ci = _resize_index_map(out_width, w)
    return mask[np.ix_(ri, ci)]


def normalize_silhouette(mask: np.ndarray, box: tuple[int, int, int, int]) -> np.ndarray:
    """Crop to the box and fit into the 96x160 canvas.

    The crop is scaled uniformly so its height becomes 160, then centered
    horizontally; overflow is cropped symmetrically, underflow zero-padded.
    The scaled width is rounded to the nearest even value so the horizontal
    padding/cropping splits evenly and mirrored inputs stay exact mirrors.
    """
    x0, y0, x1, y1 = box
    crop = np.asarray(mask, dtype=bool)[y0:y1, x0:x1]
    h, w = crop.shape
    if h < 1 or w < 1:
        raise ValueError("bounding box is empty")
    new_w = max(2, 2 * int(round(w * SILHOUETTE_HEIGHT / h / 2.0)))
    scaled = resize_mask_nearest(crop, new_w, SILHOUETTE_HEIGHT)

    out = np.zeros((SILHOUETTE_HEIGHT, SILHOUETTE_WIDTH), dtype=bool)
    if new_w <= SILHOUETTE_WIDTH:
        left = (SILHOUETTE_WIDTH - new_w) // 2
        out[:, left:left + new_w] = scaled
    else:
        cut = (new_w - SILHOUETTE_WIDTH) // 2
        out[:, :] = scaled[:, cut:cut + SILHOUETTE_WIDTH]
    return out


def segment_frame(img: np.ndarray, threshold: int = 100, sigma: float = 1.0,
                  min_pixels: int = 50, foreground_is_dark: bool = True) -> np.ndarray:
    """Full frame-to-silhouette path: denoise, threshold, clean, crop, resize."""
    smooth = gaussian_denoise(img, sigma) if sigma > 0 else np.asarray(img)
    mask = binarize(smooth, threshold, foreground_is_dark)
    mask = remove_small_blobs(mask, min_pixels)
    box = largest_blob_bbox(mask)
    return normalize_silhouette(mask, box)


def median_background(frames) -> np.ndarray:
    """Static background estimate as the per-pixel median over frames."""
    stack = np.stack([np.asarray(f, dtype=np.uint8) for f in frames])
    return np.median(stack, axis=0).astype(np.uint8)


def subtract_background(img: np.ndarray, background: np.ndarray, threshold: int) -> np.ndarray:
    """Foreground mask by absolute difference against a static background."""
    diff = np.abs(np.asarray(img, dtype=int) - np.asarray(background, dtype=int))
    return diff >= threshold


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Rec. 601 luma, rounded to the nearest integer."""
    rgb = np.asarray(rgb, dtype=float)
    luma = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.rint(luma), 0, 255).astype(np.uint8)


def _read_pnm_header(fh):
    fields = []
    while len(fields) < 4:
        line = fh.readline()
        if not line:
            raise IoFailure("truncated PNM header")
        text = line.split(b"#", 1)[0]
        fields.extend(text.split())
    return fields[:4]


def read_image(path) -> np.ndarray:
    """Read a binary PGM (P5) or PPM (P6); PPM is converted to luma."""
    try:
        with open(path, "rb") as fh:
            magic, w, h, maxval = _read_pnm_header(fh)
            width, height, maxval = int(w), int(h), int(maxval)
            if maxval != 255:
                raise IoFailure(f"{path}: only 8-bit images are supported")
            if magic == b"P5":
                data = fh.read(width * height)
                if len(data) != width * height:
                    raise IoFailure(f"{path}: truncated pixel data")
                return np.frombuffer(data, dtype=np.uint8).reshape(height, width)
            if magic == b"P6":
                data = fh.read(width * height * 3)
                if len(data) != width * height * 3:
                    raise IoFailure(f"{path}: truncated pixel data")
                rgb = np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3)
                return rgb_to_gray(rgb)
            raise IoFailure(f"{path}: unsupported format {magic!r}")
    except OSError as exc:
        raise IoFailure(f"cannot read image {path}") from exc


def write_pgm(path, img: np.ndarray) -> None:
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(img.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write image {path}") from exc


def mask_to_image(mask: np.ndarray) -> np.ndarray:
    """Render a boolean mask as a white-on-black 8-bit image."""
    return np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
