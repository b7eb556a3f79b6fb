"""Dead-reckoned 2-D path and 3-D skeletons from a state sequence.

Conventions: the path lives on an unitless x-y plane with +y as north,
heading 0 pointing north and positive headings turning clockwise.  Every
heading is a multiple of 45 degrees, so the path is a polygonal approximation
of the true track.  A repeated pose means the subject stood still for that
frame; a pose change moves the subject one fixed step along the (possibly
updated) heading.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .body import BodyModel, default_body
from .errors import (
    EmptySequence,
    InadmissibleTransition,
    InadmissibleViewpointJump,
    IoFailure,
)
from .states import StateLabel, cyc_add, cyc_sub, successors

RIGHT_CONTACT_POSE = 1  # both feet down, right foot in front (red marker)
LEFT_CONTACT_POSE = 5   # both feet down, left foot in front (blue marker)


def initial_heading(viewpoint: int) -> float:
    """World heading assigned to the first frame's viewpoint."""
    return (viewpoint - 1) * 45.0


def heading_delta(v_prev: int, v_cur: int) -> float:
    """Signed turn between consecutive viewpoints: -45 left, +45 right, 0 straight."""
    if v_cur == v_prev:
        return 0.0
    if v_cur == cyc_add(v_prev, 1):
        return -45.0
    if v_cur == cyc_sub(v_prev, 1):
        return 45.0
    raise InadmissibleViewpointJump(f"viewpoint jump V{v_prev} -> V{v_cur}")


def step_trajectory(prev_state: StateLabel, cur_state: StateLabel,
                    position: tuple[float, float], heading: float,
                    step_len: float = 1.0):
    """One fold step: returns (position, heading, moved)."""
    if step_len <= 0:
        raise ValueError("step_len must be positive")
    if cur_state not in successors(prev_state):
        raise InadmissibleTransition(f"{prev_state} -> {cur_state}")
    if cur_state.pose == prev_state.pose:
        return position, heading, False
    new_heading = (heading + heading_delta(prev_state.viewpoint, cur_state.viewpoint)) % 360.0
    rad = math.radians(new_heading)
    new_pos = (position[0] + step_len * math.sin(rad),
               position[1] + step_len * math.cos(rad))
    return new_pos, new_heading, True


def reconstruct_skeleton(pose: int, heading: float, position: tuple[float, float],
                         body: BodyModel | None = None) -> dict:
    """Place the canonical keyframe in the world.

    3-D coordinates are (x, up, y): the keyframe is rotated about the vertical
    axis by the heading and translated so the feet stand at the path point.
    """
    body = body or default_body()
    rad = math.radians(heading)
    c, s = math.cos(rad), math.sin(rad)
    px, py = position
    placed = {}
    for name, joint in body.keyframes[pose].items():
        jx, jy, jz = joint
        placed[name] = np.array([
            px + jx * c + jz * s,
            jy,
            py - jx * s + jz * c,
        ])
    return placed


@dataclass(frozen=True)
class SkeletonSample:
    frame: int
    pose: int
    heading: float
    joints: dict


@dataclass
class TrajectoryResult:
    points: list = field(default_factory=list)       # distinct path points
    skeletons: list = field(default_factory=list)    # SkeletonSample per emission
    contacts: list = field(default_factory=list)     # (skeleton index, 'left'|'right')
    frames: list = field(default_factory=list)       # per-frame CSV rows


def _contact_foot(pose: int) -> str | None:
    if pose == RIGHT_CONTACT_POSE:
        return "right"
    if pose == LEFT_CONTACT_POSE:
        return "left"
    return None


def estimate_trajectory(states, step_len: float = 1.0,
                        body: BodyModel | None = None) -> TrajectoryResult:
    """Fold the state sequence into a path with skeletons and contact markers."""
    states = list(states)
    if not states:
        raise EmptySequence("state sequence is empty")
    body = body or default_body()

    result = TrajectoryResult()
    position = (0.0, 0.0)
    heading = initial_heading(states[0].viewpoint)
    result.points.append(position)

    def emit_skeleton(frame, state):
        joints = reconstruct_skeleton(state.pose, heading, position, body)
        result.skeletons.append(SkeletonSample(frame, state.pose, heading, joints))
        foot = _contact_foot(state.pose)
        if foot is not None:
            result.contacts.append((len(result.skeletons) - 1, foot))
        return foot

    foot = emit_skeleton(1, states[0])
    result.frames.append((1, states[0].pose, states[0].viewpoint,
                          position[0], position[1], heading, foot or ""))

    for i in range(1, len(states)):
        prev, cur = states[i - 1], states[i]
        position, heading, moved = step_trajectory(prev, cur, position, heading, step_len)
        foot = None
        if moved:
            result.points.append(position)
            foot = emit_skeleton(i + 1, cur)
        result.frames.append((i + 1, cur.pose, cur.viewpoint,
                              position[0], position[1], heading, foot or ""))
    return result


CSV_HEADER = ["frame", "pose", "viewpoint", "x", "y", "heading", "contact"]


def write_trajectory_csv(path, result: TrajectoryResult) -> None:
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for frame, pose, view, x, y, heading, contact in result.frames:
                writer.writerow([frame, pose, view,
                                 f"{x:.9g}", f"{y:.9g}", f"{heading:g}", contact])
    except OSError as exc:
        raise IoFailure(f"cannot write trajectory file {path}") from exc


def write_skeletons_jsonl(path, result: TrajectoryResult) -> None:
    try:
        with open(path, "w", encoding="ascii") as fh:
            for sample in result.skeletons:
                record = {
                    "frame": sample.frame,
                    "pose": sample.pose,
                    "heading": sample.heading,
                    "joints": {k: [round(float(v), 9) for v in p]
                               for k, p in sample.joints.items()},
                }
                fh.write(json.dumps(record) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write skeleton file {path}") from exc
