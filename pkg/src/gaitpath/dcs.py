"""Dynamic classifier selection over the pose-viewpoint transition graph.

The first q frames are classified with the monolithic 64-class model; after
that, each frame is handed to the small 4-class model whose label set equals
the admissible successors of the previous prediction.  Whatever the small
model answers is therefore always a graph-admissible transition.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .ecoc import EcocModel, decode, load_model, save_model
from .errors import DimensionMismatch, EmptyStream, IoFailure
from .states import StateLabel, classes_for, cyc_add, cyc_sub, successors

__all__ = [
    "ClassifierBank", "DcsConfig", "run_dcs", "run_monolithic",
    "save_bank", "load_bank", "cyc_add", "cyc_sub", "classes_for", "successors",
]


@dataclass
class ClassifierBank:
    """One 64-class model plus the 8x8 grid of 4-class selectors."""

    c64: EcocModel
    c4: dict  # (pose, viewpoint) -> EcocModel with K = 4

    def __post_init__(self):
        dim = self.c64.feature_dim
        for (pose, view), model in self.c4.items():
            if model.feature_dim != dim:
                raise ValueError("all models in a bank must share feature_dim")
            expected = classes_for(pose, view)
            if tuple(model.coding.class_labels) != expected:
                raise ValueError(
                    f"c4[{pose}][{view}] label set does not match the transition graph"
                )
        if len(self.c4) != 64:
            raise ValueError("bank needs all 64 selector models")

    @property
    def feature_dim(self) -> int:
        return self.c64.feature_dim


@dataclass(frozen=True)
class DcsConfig:
    q: int = 4
    reinit_period: int = 0  # 0 disables periodic re-initialization

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.reinit_period < 0:
            raise ValueError("reinit_period must be >= 0")


def _check_dim(x: np.ndarray, dim: int, index: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise DimensionMismatch(f"frame {index}: expected dim {dim}, got {x.shape}")
    return x


def run_dcs(features, bank: ClassifierBank, cfg: DcsConfig = DcsConfig()) -> list[StateLabel]:
    """Classify a frame stream; returns one state label per frame.

    Frames are numbered from 1.  Frame i uses the 64-class model while i <= q
    (and again every reinit_period frames when enabled); otherwise it uses the
    selector at the previous frame's prediction.
    """
    predictions: list[StateLabel] = []
    prev: StateLabel | None = None
    for index, feat in enumerate(features, start=1):
        x = _check_dim(feat, bank.feature_dim, index)
        reinit = cfg.reinit_period > 0 and (index - 1) % cfg.reinit_period == 0
        if index <= cfg.q or reinit:
            label, _ = decode(bank.c64, x)
        else:
            model = bank.c4[(prev.pose, prev.viewpoint)]
            label, _ = decode(model, x)
        predictions.append(label)
        prev = label
    if not predictions:
        raise EmptyStream("no frames in the input stream")
    return predictions


def run_monolithic(features, bank: ClassifierBank) -> list[StateLabel]:
    """Baseline: classify every frame with the 64-class model."""
    predictions = []
    for index, feat in enumerate(features, start=1):
        x = _check_dim(feat, bank.feature_dim, index)
        label, _ = decode(bank.c64, x)
        predictions.append(label)
    if not predictions:
        raise EmptyStream("no frames in the input stream")
    return predictions


def save_bank(directory, bank: ClassifierBank, q: int = 4) -> None:
    """Bank layout: c64.ecoc, c4_<i>_<j>.ecoc, and a plain-text manifest."""
    os.makedirs(directory, exist_ok=True)
    save_model(os.path.join(directory, "c64.ecoc"), bank.c64)
    for (pose, view), model in bank.c4.items():
        save_model(os.path.join(directory, f"c4_{pose}_{view}.ecoc"), model)
    try:
        with open(os.path.join(directory, "manifest.txt"), "w", encoding="ascii") as fh:
            fh.write(f"feature_dim={bank.feature_dim}\n")
            fh.write(f"q={q}\n")
    except OSError as exc:
        raise IoFailure("cannot write bank manifest") from exc


def load_bank(directory) -> tuple[ClassifierBank, int]:
    manifest = os.path.join(directory, "manifest.txt")
    try:
        entries = {}
        with open(manifest, "r", encoding="ascii") as fh:
            for line in fh:
                if "=" in line:
                    key, value = line.strip().split("=", 1)
                    entries[key] = value
        feature_dim = int(entries["feature_dim"])
        q = int(entries.get("q", 4))
    except (OSError, KeyError, ValueError) as exc:
        raise IoFailure(f"cannot read bank manifest {manifest}") from exc

    c64 = load_model(os.path.join(directory, "c64.ecoc"))
    if c64.feature_dim != feature_dim:
        raise IoFailure("manifest feature_dim disagrees with c64 model")
    c4 = {}
    for pose in range(1, 9):
        for view in range(1, 9):
            path = os.path.join(directory, f"c4_{pose}_{view}.ecoc")
            c4[(pose, view)] = load_model(path)
    return ClassifierBank(c64=c64, c4=c4), q
