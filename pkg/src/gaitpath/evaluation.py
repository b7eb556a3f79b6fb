"""Pose/viewpoint error metrics with and without transitional errors.

A transitional error is a misclassification whose prediction is cyclically
adjacent to the ground truth; such frames merely advance or delay the true
transition, so a second set of error rates discounts them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .states import cyc_add, cyc_sub


def is_transitional(gt: int, pred: int) -> bool:
    """True when the misprediction is a cyclic neighbor of the truth."""
    return pred in (cyc_add(gt, 1), cyc_sub(gt, 1))


@dataclass(frozen=True)
class ErrorReport:
    e_pose_with_te: float
    e_pose_no_te: float
    e_view_with_te: float
    e_view_no_te: float
    frame_count: int

    def as_dict(self) -> dict:
        return {
            "e_pose_with_te": self.e_pose_with_te,
            "e_pose_no_te": self.e_pose_no_te,
            "e_view_with_te": self.e_view_with_te,
            "e_view_no_te": self.e_view_no_te,
            "frame_count": self.frame_count,
        }


def _check_aligned(ground_truth, predicted):
    gt = list(ground_truth)
    pred = list(predicted)
    if len(gt) != len(pred) or not gt:
        raise LengthMismatch(
            f"sequences must be nonempty and aligned ({len(gt)} vs {len(pred)})"
        )
    return gt, pred


def _error_pair(gt_vals, pred_vals) -> tuple[float, float]:
    total = len(gt_vals)
    wrong = [(g, p) for g, p in zip(gt_vals, pred_vals) if g != p]
    transitional = sum(1 for g, p in wrong if is_transitional(g, p))
    with_te = len(wrong) / total * 100.0
    no_te = abs(len(wrong) - transitional) / total * 100.0
    return with_te, no_te


def compute_errors(ground_truth, predicted) -> ErrorReport:
    """Four error percentages over an aligned label sequence pair."""
    gt, pred = _check_aligned(ground_truth, predicted)
    pose_with, pose_no = _error_pair([s.pose for s in gt], [s.pose for s in pred])
    view_with, view_no = _error_pair([s.viewpoint for s in gt],
                                     [s.viewpoint for s in pred])
    return ErrorReport(
        e_pose_with_te=pose_with,
        e_pose_no_te=pose_no,
        e_view_with_te=view_with,
        e_view_no_te=view_no,
        frame_count=len(gt),
    )


def confusion(ground_truth, predicted) -> np.ndarray:
    """8x8 viewpoint confusion counts; rows are ground truth."""
    gt, pred = _check_aligned(ground_truth, predicted)
    matrix = np.zeros((8, 8), dtype=int)
    for g, p in zip(gt, pred):
        matrix[g.viewpoint - 1, p.viewpoint - 1] += 1
    return matrix


def report_to_json(report: ErrorReport, matrix: np.ndarray) -> str:
    payload = report.as_dict()
    payload["viewpoint_confusion"] = matrix.tolist()
    return json.dumps(payload, indent=2)
