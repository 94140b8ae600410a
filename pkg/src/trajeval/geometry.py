"""Frame transforms, camera projection, and longitudinal/lateral error split.

The longitudinal/lateral frame at an evaluation time is the reference
trajectory's local tangent there, estimated by central differences
(one-sided at endpoints). A displacement below 1e-6 m falls back to the
vehicle +x axis so stationary references still give a deterministic frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Trajectory, Waypoint, waypoint_at_time

DEGENERATE_STEP_M = 1e-6
FALLBACK_HEADING = (1.0, 0.0)
MIN_PROJECTION_DEPTH_M = 1e-6


class CameraName(Enum):
    FRONT = "front"
    FRONT_LEFT = "front_left"
    FRONT_RIGHT = "front_right"
    SIDE_LEFT = "side_left"
    SIDE_RIGHT = "side_right"
    REAR = "rear"
    REAR_LEFT = "rear_left"
    REAR_RIGHT = "rear_right"


@dataclass(frozen=True)
class RigidTransform:
    """A proper rigid transform: orthonormal right-handed rotation + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        rot = np.asarray(self.rotation, dtype=float)
        trans = np.asarray(self.translation, dtype=float)
        if rot.shape != (3, 3) or trans.shape != (3,):
            raise ValueError(f"expected 3x3 rotation and 3-vector translation, got {rot.shape}/{trans.shape}")
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-9):
            raise ValueError("rotation is not orthonormal within 1e-9")
        if abs(np.linalg.det(rot) - 1.0) > 1e-9:
            raise ValueError(f"rotation determinant must be +1, got {np.linalg.det(rot)}")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", trans)

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    def apply(self, pt: np.ndarray) -> np.ndarray:
        return self.rotation @ np.asarray(pt, dtype=float) + self.translation

    def inverse_apply(self, pt: np.ndarray) -> np.ndarray:
        return self.rotation.T @ (np.asarray(pt, dtype=float) - self.translation)


@dataclass(frozen=True)
class CameraIntrinsics:
    f_u: float
    f_v: float
    c_u: float
    c_v: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.f_u <= 0 or self.f_v <= 0:
            raise ValueError(f"focal lengths must be positive, got f_u={self.f_u}, f_v={self.f_v}")
        if not 0 <= self.c_u <= self.width:
            raise ValueError(f"principal point c_u={self.c_u} outside image width {self.width}")
        if not 0 <= self.c_v <= self.height:
            raise ValueError(f"principal point c_v={self.c_v} outside image height {self.height}")


@dataclass(frozen=True)
class CameraCalibration:
    """One of the 8 surround cameras: intrinsics plus camera-to-vehicle extrinsics.

    Distortion coefficients are carried through from files but never applied;
    projection uses an ideal pinhole. ``image_path`` is an opaque reference.
    """

    name: CameraName
    intrinsics: CameraIntrinsics
    extrinsics: RigidTransform
    distortion: tuple[float, ...] = ()
    image_path: str | None = None


@dataclass(frozen=True)
class ErrorDecomposition:
    """Non-negative longitudinal/lateral error components in meters."""

    delta_lng: float
    delta_lat: float

    def __post_init__(self) -> None:
        if self.delta_lng < 0 or self.delta_lat < 0:
            raise ValueError(f"error components must be non-negative, got ({self.delta_lng}, {self.delta_lat})")


def heading_at_time(traj: Trajectory, t: float) -> tuple[float, float]:
    """Unit tangent of ``traj`` at sample time ``t``."""
    raw_index = (t - traj.t0_offset_s) / (1.0 / traj.cadence_hz)
    index = round(raw_index)
    if abs(raw_index - index) > 1e-9 or not 0 <= index < len(traj.waypoints):
        raise ValueError(f"t={t} is not a valid sample time of this trajectory")
    pts = traj.waypoints
    lo = max(index - 1, 0)
    hi = min(index + 1, len(pts) - 1)
    dx = pts[hi].x - pts[lo].x
    dy = pts[hi].y - pts[lo].y
    norm = math.hypot(dx, dy)
    if norm < DEGENERATE_STEP_M:
        return FALLBACK_HEADING
    return (dx / norm, dy / norm)


def decompose_error(pred_pt: Waypoint, rater_traj: Trajectory, t: float) -> ErrorDecomposition:
    """Split the prediction error at time ``t`` into |longitudinal| and |lateral| parts."""
    ref = waypoint_at_time(rater_traj, t)
    ux, uy = heading_at_time(rater_traj, t)
    ex = pred_pt.x - ref.x
    ey = pred_pt.y - ref.y
    # left normal of (ux, uy) is (-uy, ux)
    return ErrorDecomposition(abs(ex * ux + ey * uy), abs(-ex * uy + ey * ux))


def vehicle_to_camera(pt: np.ndarray, calib: CameraCalibration) -> np.ndarray:
    """Express a vehicle-frame point in the camera frame (x out of lens, z up)."""
    return calib.extrinsics.inverse_apply(pt)


def project_to_image(pt_vehicle: np.ndarray, calib: CameraCalibration) -> tuple[float, float] | None:
    """Pinhole-project a vehicle-frame point; None when behind the lens or off-image."""
    x_c, y_c, z_c = vehicle_to_camera(pt_vehicle, calib)
    if x_c <= MIN_PROJECTION_DEPTH_M:
        return None
    intr = calib.intrinsics
    u = intr.c_u - intr.f_u * (y_c / x_c)
    v = intr.c_v - intr.f_v * (z_c / x_c)
    if not (0 <= u <= intr.width and 0 <= v <= intr.height):
        return None
    return (u, v)
