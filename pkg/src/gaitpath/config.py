"""Run configuration: flat key=value file plus command-line overrides.

All randomness flows from a single seed, fanned out per module by hashing a
module tag into the seed so independent stages never share a stream.
"""

from __future__ import annotations

import dataclasses
import zlib
from dataclasses import dataclass

from .errors import IoFailure


@dataclass
class RunConfig:
    # paths
    dataset_dir: str = "dataset"
    model_dir: str = "models"
    preset_file: str = ""
    output_dir: str = "out"

    # segmentation
    threshold: int = 100
    sigma: float = 1.0
    min_pixels: int = 50
    bright_foreground: bool = False

    # training
    c: float = 1.0
    tol: float = 1e-4
    max_epochs: int = 1000
    seed: int = 0

    # dynamic classifier selection
    q: int = 4
    reinit_period: int = 0

    # trajectory
    step_len: float = 1.0

    # synthesis
    per_class: int = 16
    noise: float = 0.02
    walk: str = ""
    frames_per_pose: int = 3
    cycles: int = 8
    start_view: int = 3

    # perspective
    phi: float = 0.0

    def validate(self) -> None:
        if not 0 <= self.threshold <= 255:
            raise ValueError("threshold must be in 0..255")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.min_pixels < 0:
            raise ValueError("min_pixels must be >= 0")
        if self.c <= 0 or self.tol <= 0 or self.max_epochs < 1:
            raise ValueError("invalid training parameters")
        if self.q < 1 or self.reinit_period < 0:
            raise ValueError("invalid classifier-selection parameters")
        if self.step_len <= 0:
            raise ValueError("step_len must be positive")
        if self.per_class < 1 or not 0 <= self.noise <= 1:
            raise ValueError("invalid synthesis parameters")
        if not 1 <= self.start_view <= 8:
            raise ValueError("start_view must be in 1..8")
        if self.phi < 0:
            raise ValueError("phi must be >= 0")


def _cast(field: dataclasses.Field, raw: str):
    if field.type in ("bool", bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if field.type in ("int", int):
        return int(raw)
    if field.type in ("float", float):
        return float(raw)
    return raw


def load_config(path) -> RunConfig:
    """Parse a flat key=value file; unknown keys are rejected."""
    cfg = RunConfig()
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise IoFailure(f"{path}:{lineno}: expected key=value")
                key, value = (tok.strip() for tok in line.split("=", 1))
                if key not in fields:
                    raise IoFailure(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    setattr(cfg, key, _cast(fields[key], value))
                except ValueError as exc:
                    raise IoFailure(f"{path}:{lineno}: bad value for {key}") from exc
    except OSError as exc:
        raise IoFailure(f"cannot read config file {path}") from exc
    return cfg


def derive_seed(seed: int, tag: str) -> int:
    """Deterministic per-module seed from the run seed and a module tag."""
    return (seed * 0x9E3779B1 + zlib.crc32(tag.encode("ascii"))) & 0x7FFFFFFF
