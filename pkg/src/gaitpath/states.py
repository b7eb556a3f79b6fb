"""The 64-state pose-viewpoint model.

A walking subject is described by one of 8 cyclic gait sub-steps (pose) seen
from one of 8 azimuth sectors 45 degrees apart (viewpoint).  Both indices are
1-based and wrap cyclically.  A state can stay put, or advance its pose while
keeping the viewpoint or turning it one sector either way; that gives every
state exactly four successors.
"""

from __future__ import annotations

from dataclasses import dataclass

N_POSES = 8
N_VIEWPOINTS = 8
N_STATES = N_POSES * N_VIEWPOINTS


def cyc_add(i: int, j: int) -> int:
    """1-based cyclic increment over 1..8."""
    return (i + j - 1) % 8 + 1


def cyc_sub(i: int, j: int) -> int:
    """1-based cyclic decrement over 1..8; inverse of cyc_add."""
    return (i - j - 1) % 8 + 1


def _check_index(value: int, name: str) -> None:
    if not 1 <= value <= 8:
        raise ValueError(f"{name} must be in 1..8, got {value}")


@dataclass(frozen=True, order=True)
class StateLabel:
    """A (pose, viewpoint) pair; one of the 64 classes."""

    pose: int
    viewpoint: int

    def __post_init__(self):
        _check_index(self.pose, "pose")
        _check_index(self.viewpoint, "viewpoint")

    def __str__(self):
        return f"P{self.pose}V{self.viewpoint}"


ALL_STATES: tuple[StateLabel, ...] = tuple(
    StateLabel(p, v) for p in range(1, 9) for v in range(1, 9)
)


def classes_for(pose: int, viewpoint: int) -> tuple[StateLabel, ...]:
    """The 4-class set recognized by the selector at (pose, viewpoint).

    Ordered: stay, advance straight, advance turning right, advance turning
    left (viewpoint -1 then +1).
    """
    _check_index(pose, "pose")
    _check_index(viewpoint, "viewpoint")
    nxt = cyc_add(pose, 1)
    return (
        StateLabel(pose, viewpoint),
        StateLabel(nxt, viewpoint),
        StateLabel(nxt, cyc_sub(viewpoint, 1)),
        StateLabel(nxt, cyc_add(viewpoint, 1)),
    )


def successors(state: StateLabel) -> tuple[StateLabel, ...]:
    """Admissible next states; identical to classes_for by construction."""
    return classes_for(state.pose, state.viewpoint)


def is_admissible(prev: StateLabel, cur: StateLabel) -> bool:
    return cur in successors(prev)
