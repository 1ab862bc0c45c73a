"""Pinhole projection of a planar road onto the camera focal plane.

Coordinates follow the camera frame: the pinhole sits at the origin, ``z``
runs along the optical axis (inclined ``pitch`` below the horizon), ``x`` is
lateral. A road point is fully described by ``(x, z)``; its ``y`` coordinate
is pinned by the road plane, ``y = z tan(pitch) - h sec(pitch)``.

All lengths are centimetres, all stored angles radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class GeometryError(ValueError):
    """Input outside the domain of the projection."""


@dataclass(frozen=True)
class CameraConfig:
    focal_length: float
    height: float
    pitch: float
    vertical_fov: float
    horizontal_fov: float

    def __post_init__(self):
        if not self.focal_length > 0:
            raise GeometryError(f"focal_length must be > 0, got {self.focal_length}")
        if not self.height > 0:
            raise GeometryError(f"height must be > 0, got {self.height}")
        if not 0 < self.pitch < math.pi / 2:
            raise GeometryError("pitch must lie in (0, pi/2)")
        if not 0 < self.vertical_fov < math.pi:
            raise GeometryError("vertical_fov must lie in (0, pi)")
        if not 0 < self.horizontal_fov < math.pi:
            raise GeometryError("horizontal_fov must lie in (0, pi)")
        if not self.pitch - self.vertical_fov / 2 > 0:
            raise GeometryError("upper edge of the view reaches the horizon")

    @classmethod
    def from_degrees(cls, focal_length, height, pitch_deg, vfov_deg, hfov_deg):
        return cls(
            focal_length=float(focal_length),
            height=float(height),
            pitch=math.radians(pitch_deg),
            vertical_fov=math.radians(vfov_deg),
            horizontal_fov=math.radians(hfov_deg),
        )

    @classmethod
    def from_json_dict(cls, d: dict) -> "CameraConfig":
        return cls.from_degrees(
            d["focal_length_cm"], d["height_cm"], d["pitch_deg"], d["vfov_deg"], d["hfov_deg"]
        )

    def to_json_dict(self) -> dict:
        return {
            "focal_length_cm": self.focal_length,
            "height_cm": self.height,
            "pitch_deg": math.degrees(self.pitch),
            "vfov_deg": math.degrees(self.vertical_fov),
            "hfov_deg": math.degrees(self.horizontal_fov),
        }

    @property
    def horizon_ytilde(self) -> float:
        """Focal-plane ``y~`` of the horizon; road images lie strictly below it."""
        return self.focal_length * math.tan(self.pitch)


@dataclass(frozen=True)
class RoadPoint:
    x: float
    z: float


@dataclass(frozen=True)
class FocalPoint:
    x: float
    y: float


@dataclass(frozen=True)
class RoadRegion:
    x_lower: float
    x_upper: float
    z_lower: float
    z_upper: float

    def __post_init__(self):
        if not self.x_lower < self.x_upper:
            raise GeometryError("region needs x_lower < x_upper")
        if not 0 < self.z_lower < self.z_upper:
            raise GeometryError("region needs 0 < z_lower < z_upper")


def _check_depth(z):
    if not z > 0:
        raise GeometryError(f"road depth must be positive, got z={z}")


def project_point(cfg: CameraConfig, p: RoadPoint) -> FocalPoint:
    _check_depth(p.z)
    f = cfg.focal_length
    xt = f * p.x / p.z
    yt = f * math.tan(cfg.pitch) - (f * cfg.height / p.z) / math.cos(cfg.pitch)
    return FocalPoint(xt, yt)


def depth_from_ytilde(cfg: CameraConfig, ytilde: float) -> float:
    """Invert the vertical projection: depth ``z`` of the road point imaged at ``ytilde``."""
    f = cfg.focal_length
    denom = f * math.sin(cfg.pitch) - ytilde * math.cos(cfg.pitch)
    if not denom > 0:
        raise GeometryError(f"y~={ytilde} is at or above the horizon (f tan(pitch)={cfg.horizon_ytilde})")
    return f * cfg.height / denom


def road_point_from_focal(cfg: CameraConfig, q: FocalPoint) -> RoadPoint:
    z = depth_from_ytilde(cfg, q.y)
    return RoadPoint(q.x * z / cfg.focal_length, z)


def jacobian(cfg: CameraConfig, p: RoadPoint) -> np.ndarray:
    """Derivatives of ``(x~, y~)`` with respect to ``(x, z)``.

    Row-major in the input variable::

        [[dx~/dx, dy~/dx],
         [dx~/dz, dy~/dz]]

    ``dy~/dz`` is positive: ``y~`` grows toward the horizon as depth grows.
    """
    _check_depth(p.z)
    f, z = cfg.focal_length, p.z
    return np.array(
        [
            [f / z, 0.0],
            [-f * p.x / z**2, f * cfg.height / (z**2 * math.cos(cfg.pitch))],
        ]
    )


def jacobian_det(cfg: CameraConfig, z) -> float:
    """Closed-form Jacobian determinant, ``f^2 h sec(pitch) / z^3`` (depends on depth only)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise GeometryError("road depth must be positive")
    return cfg.focal_length**2 * cfg.height / math.cos(cfg.pitch) / z**3


def projected_area(cfg: CameraConfig, r: RoadRegion) -> float:
    """Focal-plane area covered by the image of a road rectangle (cm^2)."""
    k = cfg.focal_length**2 * cfg.height / math.cos(cfg.pitch)
    return k * (r.x_upper - r.x_lower) / 2 * (1 / r.z_lower**2 - 1 / r.z_upper**2)


def camera_depth(cfg: CameraConfig, ground_distance):
    """Optical-axis depth ``z`` of a road point lying ``ground_distance`` ahead of the camera foot."""
    d = np.asarray(ground_distance, dtype=float)
    return d * math.cos(cfg.pitch) + cfg.height * math.sin(cfg.pitch)


def ground_distance(cfg: CameraConfig, z):
    z = np.asarray(z, dtype=float)
    return (z - cfg.height * math.sin(cfg.pitch)) / math.cos(cfg.pitch)
