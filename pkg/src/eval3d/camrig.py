"""Camera rigs circling the origin, and the pinhole projection operator.

Conventions, fixed once and used everywhere:

* world is right-handed, up is +y;
* azimuth is measured around +y starting from +z (azimuth 0 puts the
  camera on the +z axis: the canonical view), elevation tilts up from the
  horizontal plane;
* the camera looks down its own -z axis at the world origin;
* image u grows right, v grows down; pixel (row r, col c) has its center
  at (u, v) = (c + 0.5, r + 0.5);
* "depth" is the positive distance along the viewing direction
  (camera-space -z).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import RigError

DEFAULT_DISTANCE = 4.2
DEFAULT_VFOV_DEG = 50.0
DEFAULT_NEAR = 0.1
DEFAULT_FAR = 10.0
DEFAULT_RESOLUTION = 512
DEFAULT_ELEVATION_DEG = 15.0
DEFAULT_N_VIEWS = 120


@dataclass(frozen=True, eq=False)
class CameraView:
    id: int
    azimuth: float
    elevation: float
    distance: float
    vfov: float
    width: int
    height: int
    world_to_camera: np.ndarray  # 4x4, rigid
    near: float = DEFAULT_NEAR
    far: float = DEFAULT_FAR

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.world_to_camera, dtype=np.float64))
        if m.shape != (4, 4):
            raise RigError(f"world_to_camera must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "world_to_camera", m)

    @property
    def fx(self) -> float:
        return (self.height / 2.0) / np.tan(np.radians(self.vfov) / 2.0)

    @property
    def fy(self) -> float:
        return self.fx

    @property
    def cx(self) -> float:
        return self.width / 2.0

    @property
    def cy(self) -> float:
        return self.height / 2.0

    @property
    def rotation(self) -> np.ndarray:
        return self.world_to_camera[:3, :3]

    @property
    def center(self) -> np.ndarray:
        """Camera center in world coordinates."""
        R = self.rotation
        t = self.world_to_camera[:3, 3]
        return -R.T @ t

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "azimuth": self.azimuth,
            "elevation": self.elevation,
            "distance": self.distance,
            "vfov": self.vfov,
            "width": self.width,
            "height": self.height,
            "near": self.near,
            "far": self.far,
            "world_to_camera": [list(row) for row in self.world_to_camera],
        }

    @staticmethod
    def from_dict(d: dict) -> "CameraView":
        return CameraView(
            id=d["id"],
            azimuth=d["azimuth"],
            elevation=d["elevation"],
            distance=d["distance"],
            vfov=d["vfov"],
            width=d["width"],
            height=d["height"],
            near=d.get("near", DEFAULT_NEAR),
            far=d.get("far", DEFAULT_FAR),
            world_to_camera=np.asarray(d["world_to_camera"], dtype=np.float64),
        )


@dataclass(frozen=True)
class RigSpec:
    n_views: int = DEFAULT_N_VIEWS
    elevation: float = DEFAULT_ELEVATION_DEG
    distance: float = DEFAULT_DISTANCE
    vfov: float = DEFAULT_VFOV_DEG
    resolution: int = DEFAULT_RESOLUTION
    near: float = DEFAULT_NEAR
    far: float = DEFAULT_FAR

    def __post_init__(self):
        if self.n_views < 1:
            raise RigError("n_views must be >= 1")
        if not 0 < self.vfov < 180:
            raise RigError("vfov must be in (0, 180) degrees")


def camera_position(azimuth_deg: float, elevation_deg: float, distance: float) -> np.ndarray:
    az = np.radians(azimuth_deg)
    el = np.radians(elevation_deg)
    return distance * np.array(
        [np.cos(el) * np.sin(az), np.sin(el), np.cos(el) * np.cos(az)]
    )


def look_at(center: np.ndarray, target=(0.0, 0.0, 0.0), up=(0.0, 1.0, 0.0)) -> np.ndarray:
    """World-to-camera rigid transform for a camera at ``center`` facing ``target``."""
    center = np.asarray(center, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    up = np.asarray(up, dtype=np.float64)
    forward = target - center
    norm = np.linalg.norm(forward)
    if norm == 0:
        raise RigError("camera center coincides with target")
    forward = forward / norm
    right = np.cross(forward, up)
    rnorm = np.linalg.norm(right)
    if rnorm < 1e-9:
        raise RigError("degenerate up vector: view direction parallel to up")
    right = right / rnorm
    true_up = np.cross(right, forward)
    R = np.stack([right, true_up, -forward])
    m = np.eye(4)
    m[:3, :3] = R
    m[:3, 3] = -R @ center
    return m


def build_rig(spec: RigSpec) -> list[CameraView]:
    """Evenly spaced azimuth ring: view i sits at azimuth i * 360 / n_views."""
    views = []
    for i in range(spec.n_views):
        azimuth = i * 360.0 / spec.n_views
        center = camera_position(azimuth, spec.elevation, spec.distance)
        views.append(
            CameraView(
                id=i,
                azimuth=azimuth,
                elevation=spec.elevation,
                distance=spec.distance,
                vfov=spec.vfov,
                width=spec.resolution,
                height=spec.resolution,
                near=spec.near,
                far=spec.far,
                world_to_camera=look_at(center),
            )
        )
    return views


def project(view: CameraView, points: np.ndarray):
    """Pinhole projection of world points.

    Accepts a single (3,) point or an (N, 3) batch; returns (u, v, depth,
    in_frustum) with matching leading shape. Depth is positive in front of
    the camera; in_frustum additionally requires the pixel to land inside
    the image and near < depth < far.
    """
    p = np.asarray(points, dtype=np.float64)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    cam = p @ view.rotation.T + view.world_to_camera[:3, 3]
    depth = -cam[:, 2]
    safe = np.where(depth != 0, depth, np.finfo(np.float64).tiny)
    u = view.cx + view.fx * cam[:, 0] / safe
    v = view.cy - view.fy * cam[:, 1] / safe
    in_frustum = (
        (depth > view.near)
        & (depth < view.far)
        & (u >= 0)
        & (u < view.width)
        & (v >= 0)
        & (v < view.height)
    )
    if single:
        return float(u[0]), float(v[0]), float(depth[0]), bool(in_frustum[0])
    return u, v, depth, in_frustum


def unproject(view: CameraView, u, v, depth):
    """Inverse of :func:`project` for in-frustum pixels; returns world points."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    depth = np.asarray(depth, dtype=np.float64)
    x = (u - view.cx) / view.fx * depth
    y = -(v - view.cy) / view.fy * depth
    cam = np.stack([x, y, -depth], axis=-1)
    R = view.rotation
    t = view.world_to_camera[:3, 3]
    return (cam - t) @ R


def camera_space_points(view: CameraView, u, v, depth) -> np.ndarray:
    """Camera-space 3D point for pixel coordinates at the given depth."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    depth = np.asarray(depth, dtype=np.float64)
    x = (u - view.cx) / view.fx * depth
    y = -(v - view.cy) / view.fy * depth
    return np.stack([x, y, -depth], axis=-1)


def subsample_rig(rig: list[CameraView], n: int) -> list[CameraView]:
    """Every (len/n)-th view starting at the azimuth-0 view."""
    if n < 1 or len(rig) % n != 0:
        raise RigError(f"{n} does not divide rig size {len(rig)}")
    step = len(rig) // n
    return rig[::step]


def views_at_azimuths(rig: list[CameraView], azimuths, tol: float = 1e-6) -> list[CameraView]:
    """Pick the rig views matching the requested azimuths (error if absent)."""
    out = []
    for az in azimuths:
        want = az % 360.0
        match = [v for v in rig if abs((v.azimuth % 360.0) - want) < tol]
        if not match:
            raise RigError(f"rig has no view at azimuth {az}")
        out.append(match[0])
    return out


def save_rig(rig: list[CameraView], path: str | Path) -> None:
    data = {"views": [v.to_dict() for v in rig]}
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True))


def load_rig(path: str | Path) -> list[CameraView]:
    data = json.loads(Path(path).read_text())
    return [CameraView.from_dict(d) for d in data["views"]]
