"""Articulated 13-joint body model with one keyframe per gait sub-step.

The same keyframes drive both the synthetic silhouette renderer and the 3-D
skeleton reconstruction along estimated trajectories.  Body frame: x points
to the subject's left, y up, z along the walking direction; the lower foot of
each keyframe rests on y = 0.

Gait convention: at sub-step 1 both feet touch the ground with the right foot
in front; the left leg swings through sub-steps 2-4, lands in front at
sub-step 5, and the right leg swings through 6-8.  Arm swing opposes the leg
on the same side and is deliberately a little stronger on the right, since a
perfectly symmetric walker renders identical silhouettes half a cycle apart
and no appearance-only classifier could tell them apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

JOINT_NAMES = (
    "head",
    "l_shoulder", "r_shoulder",
    "l_elbow", "r_elbow",
    "l_wrist", "r_wrist",
    "l_hip", "r_hip",
    "l_knee", "r_knee",
    "l_ankle", "r_ankle",
)


@dataclass(frozen=True)
class BodyModel:
    # lengths (unitless), symmetric left/right
    shoulder_height: float = 1.45
    hip_height: float = 0.95
    shoulder_halfwidth: float = 0.20
    hip_halfwidth: float = 0.12
    thigh: float = 0.46
    shin: float = 0.44
    upper_arm: float = 0.30
    forearm: float = 0.26
    head_offset: float = 0.20
    head_radius: float = 0.11

    # capsule radii for rasterization
    torso_radius: float = 0.14
    leg_radius: float = 0.055
    arm_radius: float = 0.045

    # gait keyframe parameters (degrees)
    leg_amplitude: float = 32.0
    knee_flexion: float = 55.0
    arm_amplitude_left: float = 16.0
    arm_amplitude_right: float = 26.0
    elbow_flexion: float = 25.0

    keyframes: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        frames = {pose: self._build_keyframe(pose) for pose in range(1, 9)}
        object.__setattr__(self, "keyframes", frames)

    def _limb(self, origin, length, angle_deg):
        """Endpoint of a limb hanging from origin, swung forward by angle."""
        a = math.radians(angle_deg)
        return origin + length * np.array([0.0, -math.cos(a), math.sin(a)])

    def _build_keyframe(self, pose: int) -> dict:
        phase = 2.0 * math.pi * (pose - 1) / 8.0
        cphi, sphi = math.cos(phase), math.sin(phase)

        hip_r_angle = self.leg_amplitude * cphi
        hip_l_angle = -self.leg_amplitude * cphi
        knee_r_flex = self.knee_flexion * max(0.0, -sphi)
        knee_l_flex = self.knee_flexion * max(0.0, sphi)
        shoulder_r_angle = -self.arm_amplitude_right * cphi
        shoulder_l_angle = self.arm_amplitude_left * cphi

        l_hip = np.array([self.hip_halfwidth, self.hip_height, 0.0])
        r_hip = np.array([-self.hip_halfwidth, self.hip_height, 0.0])
        l_shoulder = np.array([self.shoulder_halfwidth, self.shoulder_height, 0.0])
        r_shoulder = np.array([-self.shoulder_halfwidth, self.shoulder_height, 0.0])

        l_knee = self._limb(l_hip, self.thigh, hip_l_angle)
        r_knee = self._limb(r_hip, self.thigh, hip_r_angle)
        l_ankle = self._limb(l_knee, self.shin, hip_l_angle - knee_l_flex)
        r_ankle = self._limb(r_knee, self.shin, hip_r_angle - knee_r_flex)

        l_elbow = self._limb(l_shoulder, self.upper_arm, shoulder_l_angle)
        r_elbow = self._limb(r_shoulder, self.upper_arm, shoulder_r_angle)
        l_wrist = self._limb(l_elbow, self.forearm, shoulder_l_angle + self.elbow_flexion)
        r_wrist = self._limb(r_elbow, self.forearm, shoulder_r_angle + self.elbow_flexion)

        head = np.array([0.0, self.shoulder_height + self.head_offset, 0.0])

        joints = {
            "head": head,
            "l_shoulder": l_shoulder, "r_shoulder": r_shoulder,
            "l_elbow": l_elbow, "r_elbow": r_elbow,
            "l_wrist": l_wrist, "r_wrist": r_wrist,
            "l_hip": l_hip, "r_hip": r_hip,
            "l_knee": l_knee, "r_knee": r_knee,
            "l_ankle": l_ankle, "r_ankle": r_ankle,
        }
        # rest the lower foot on the ground plane
        drop = min(joints["l_ankle"][1], joints["r_ankle"][1])
        return {name: p - np.array([0.0, drop, 0.0]) for name, p in joints.items()}

    def capsules(self, pose: int):
        """(start, end, radius) tuples describing the figure's solid shape."""
        j = self.keyframes[pose]
        neck = 0.5 * (j["l_shoulder"] + j["r_shoulder"])
        pelvis = 0.5 * (j["l_hip"] + j["r_hip"])
        return [
            (j["head"], j["head"], self.head_radius),
            (neck, pelvis, self.torso_radius),
            (j["l_shoulder"], j["r_shoulder"], self.arm_radius * 1.3),
            (j["l_hip"], j["r_hip"], self.leg_radius * 1.4),
            (j["l_shoulder"], j["l_elbow"], self.arm_radius),
            (j["l_elbow"], j["l_wrist"], self.arm_radius),
            (j["r_shoulder"], j["r_elbow"], self.arm_radius),
            (j["r_elbow"], j["r_wrist"], self.arm_radius),
            (j["l_hip"], j["l_knee"], self.leg_radius),
            (j["l_knee"], j["l_ankle"], self.leg_radius),
            (j["r_hip"], j["r_knee"], self.leg_radius),
            (j["r_knee"], j["r_ankle"], self.leg_radius),
        ]


_DEFAULT_BODY: BodyModel | None = None


def default_body() -> BodyModel:
    global _DEFAULT_BODY
    if _DEFAULT_BODY is None:
        _DEFAULT_BODY = BodyModel()
    return _DEFAULT_BODY
