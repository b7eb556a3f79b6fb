"""Multiclass classification by one-versus-one ECOC over linear SVMs.

A K-class problem is reduced to K(K-1)/2 pairwise binary problems described
by a ternary coding matrix.  Binary learners are L1-hinge linear SVMs trained
by dual coordinate descent.  Decoding picks the class whose codeword has the
smallest accumulated hinge loss over the learner outputs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabels,
    IoFailure,
    MissingClassSamples,
    SingleClassInput,
)
from .states import StateLabel


@dataclass(frozen=True)
class CodingMatrix:
    """Ternary K x N code: one +1 and one -1 per column (one-versus-one)."""

    entries: np.ndarray
    class_labels: tuple[StateLabel, ...]

    def __post_init__(self):
        m = self.entries
        k = len(self.class_labels)
        if m.shape[0] != k:
            raise ValueError("coding matrix rows must match the label count")
        if not np.isin(m, (-1, 0, 1)).all():
            raise ValueError("coding matrix entries must be in {-1, 0, +1}")
        if np.any((m == 1).sum(axis=0) != 1) or np.any((m == -1).sum(axis=0) != 1):
            raise ValueError("each column needs exactly one +1 and one -1")
        if np.any(np.abs(m).sum(axis=1) == 0):
            raise ValueError("coding matrix has an all-zero row")

    @property
    def n_classes(self) -> int:
        return self.entries.shape[0]

    @property
    def n_learners(self) -> int:
        return self.entries.shape[1]


def build_ovo_coding(labels) -> CodingMatrix:
    """One-versus-one code: columns enumerate pairs (i, j), i < j, lexicographically."""
    labels = tuple(labels)
    if len(labels) < 2:
        raise ValueError("need at least two classes")
    if len(set(labels)) != len(labels):
        raise DuplicateLabels("class labels must be distinct")
    k = len(labels)
    n = k * (k - 1) // 2
    entries = np.zeros((k, n), dtype=np.int8)
    for col, (i, j) in enumerate(combinations(range(k), 2)):
        entries[i, col] = 1
        entries[j, col] = -1
    return CodingMatrix(entries=entries, class_labels=labels)


@dataclass(frozen=True)
class TrainConfig:
    c: float = 1.0
    tol: float = 1e-4
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.c <= 0 or self.tol <= 0 or self.max_epochs < 1:
            raise ValueError("invalid training configuration")


@dataclass
class BinaryLearner:
    weights: np.ndarray
    bias: float

    def decision(self, x: np.ndarray) -> float:
        return float(self.weights @ x + self.bias)


def _dual_cd(gram: np.ndarray, y: np.ndarray, cfg: TrainConfig) -> np.ndarray:
    """Dual coordinate descent for the L1-hinge SVM; returns alphas.

    Works on the Gram matrix of bias-augmented samples, so each coordinate
    step is O(n) regardless of the feature dimension.
    """
    n = y.shape[0]
    q = gram * np.outer(y, y)
    qdiag = np.diag(q).copy()
    qdiag[qdiag <= 0] = 1e-12
    alpha = np.zeros(n)
    grad_cache = np.full(n, -1.0)  # (Q alpha)_i - 1
    rng = np.random.default_rng(cfg.seed)
    order = np.arange(n)

    for _ in range(cfg.max_epochs):
        rng.shuffle(order)
        max_violation = 0.0
        for i in order:
            g = grad_cache[i]
            if alpha[i] <= 0.0:
                pg = min(g, 0.0)
            elif alpha[i] >= cfg.c:
                pg = max(g, 0.0)
            else:
                pg = g
            if abs(pg) > max_violation:
                max_violation = abs(pg)
            if abs(pg) > 1e-12:
                new = min(max(alpha[i] - g / qdiag[i], 0.0), cfg.c)
                delta = new - alpha[i]
                if delta != 0.0:
                    alpha[i] = new
                    grad_cache += delta * q[:, i]
        if max_violation < cfg.tol:
            break
    return alpha


def _train_from_gram(gram_aug: np.ndarray, X: np.ndarray, y: np.ndarray,
                     cfg: TrainConfig) -> BinaryLearner:
    alpha = _dual_cd(gram_aug, y, cfg)
    coef = alpha * y
    # store at f32 precision so in-memory and serialized models predict identically
    w = (X.T @ coef).astype(np.float32).astype(float)
    b = float(np.float32(coef.sum()))  # bias learned as an augmented all-ones feature
    return BinaryLearner(weights=w, bias=b)


def train_binary(features, signs, cfg: TrainConfig = TrainConfig()) -> BinaryLearner:
    """Train one linear SVM; signs are +-1 per sample."""
    X = np.asarray(features, dtype=float)
    y = np.asarray(signs, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("features and signs are misaligned")
    if not ((y == 1).any() and (y == -1).any()):
        raise SingleClassInput("need at least one example of each sign")
    gram_aug = X @ X.T + 1.0
    return _train_from_gram(gram_aug, X, y, cfg)


@dataclass
class EcocModel:
    coding: CodingMatrix
    learners: list[BinaryLearner]
    feature_dim: int

    _w_stack: np.ndarray | None = field(default=None, repr=False, compare=False)
    _b_stack: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.learners) != self.coding.n_learners:
            raise ValueError("learner count must match the coding matrix")
        for lrn in self.learners:
            if lrn.weights.shape != (self.feature_dim,):
                raise ValueError("learner weight dimension mismatch")

    def _stacks(self):
        if self._w_stack is None:
            self._w_stack = np.stack([l.weights for l in self.learners])
            self._b_stack = np.array([l.bias for l in self.learners])
        return self._w_stack, self._b_stack

    def decisions(self, x: np.ndarray) -> np.ndarray:
        w, b = self._stacks()
        return w @ x + b


def train_ecoc(features, labels, class_labels, cfg: TrainConfig = TrainConfig()) -> EcocModel:
    """Train a full ECOC model under one-versus-one coding.

    For each column only the samples of the two involved classes are used,
    with signs taken from the column.
    """
    X = np.asarray(features, dtype=float)
    coding = build_ovo_coding(class_labels)
    label_to_row = {lbl: r for r, lbl in enumerate(coding.class_labels)}
    rows = np.array([label_to_row[lbl] for lbl in labels])
    for lbl, r in label_to_row.items():
        if not (rows == r).any():
            raise MissingClassSamples(f"no samples for class {lbl}")

    # one Gram matrix over all samples; per-column training slices it
    gram_aug = X @ X.T + 1.0

    learners = []
    for col in range(coding.n_learners):
        column = coding.entries[:, col]
        signs_by_row = column[rows]
        sel = np.flatnonzero(signs_by_row != 0)
        y = signs_by_row[sel].astype(float)
        sub_gram = gram_aug[np.ix_(sel, sel)]
        learners.append(_train_from_gram(sub_gram, X[sel], y, cfg))
    return EcocModel(coding=coding, learners=learners, feature_dim=X.shape[1])


def codeword_losses(entries: np.ndarray, decisions: np.ndarray) -> np.ndarray:
    """Loss-based decoding table: hinge/2 for +-1 entries, 1/2 for zeros."""
    m = entries.astype(float)
    hinge = np.maximum(0.0, 1.0 - m * decisions[None, :]) / 2.0
    return np.where(m != 0.0, hinge, 0.5).sum(axis=1)


def decode(model: EcocModel, x) -> tuple[StateLabel, np.ndarray]:
    """Predict the class minimizing the codeword loss; ties go to the lowest row."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.feature_dim,):
        raise DimensionMismatch(
            f"expected dim {model.feature_dim}, got {x.shape}"
        )
    f = model.decisions(x)
    losses = codeword_losses(model.coding.entries, f)
    row = int(np.argmin(losses))
    return model.coding.class_labels[row], losses


def decode_batch(model: EcocModel, X: np.ndarray) -> list[StateLabel]:
    w, b = model._stacks()
    decisions = X @ w.T + b
    m = model.coding.entries.astype(float)
    hinge = np.maximum(0.0, 1.0 - decisions[:, None, :] * m[None, :, :]) / 2.0
    losses = np.where(m[None, :, :] != 0.0, hinge, 0.5).sum(axis=2)
    rows = np.argmin(losses, axis=1)
    return [model.coding.class_labels[r] for r in rows]


_MAGIC = b"ECOC"
_FORMAT_VERSION = 1


def save_model(path, model: EcocModel) -> None:
    """Little-endian binary model file (see the format constants above)."""
    k = model.coding.n_classes
    n = model.coding.n_learners
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<HIII", _FORMAT_VERSION, k, n, model.feature_dim))
            for lbl in model.coding.class_labels:
                fh.write(struct.pack("<BB", lbl.pose, lbl.viewpoint))
            fh.write(model.coding.entries.astype("<i1").tobytes())
            for lrn in model.learners:
                fh.write(lrn.weights.astype("<f4").tobytes())
                fh.write(struct.pack("<f", lrn.bias))
    except OSError as exc:
        raise IoFailure(f"cannot write model file {path}") from exc


def load_model(path) -> EcocModel:
    try:
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise IoFailure(f"{path}: bad magic {magic!r}")
            version, k, n, dim = struct.unpack("<HIII", fh.read(14))
            if version != _FORMAT_VERSION:
                raise IoFailure(f"{path}: unsupported format version {version}")
            labels = []
            for _ in range(k):
                pose, view = struct.unpack("<BB", fh.read(2))
                labels.append(StateLabel(pose, view))
            entries = np.frombuffer(fh.read(k * n), dtype="<i1").reshape(k, n).copy()
            learners = []
            for _ in range(n):
                w = np.frombuffer(fh.read(4 * dim), dtype="<f4").astype(float)
                (b,) = struct.unpack("<f", fh.read(4))
                learners.append(BinaryLearner(weights=w, bias=b))
    except OSError as exc:
        raise IoFailure(f"cannot read model file {path}") from exc
    coding = CodingMatrix(entries=entries, class_labels=tuple(labels))
    return EcocModel(coding=coding, learners=learners, feature_dim=dim)
