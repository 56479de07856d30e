"""Monocular-depth post-processing: affine alignment and normal conversion.

Monocular depth backends emit relative (affine-invariant) depth or
disparity. Before converting to normals we resolve the ambiguity with a
least-squares scale/shift fit against the engine's own rendered depth.
"""

from __future__ import annotations

import numpy as np

from ..camrig import CameraView
from ..errors import InvertedDepthError, MetricError

MIN_ALIGN_PIXELS = 100


def align_depth(pred: np.ndarray, ref: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Fit s, b minimizing sum((s * pred + b - ref)^2) over masked pixels.

    Returns s * pred + b. Raises InvertedDepthError when the fitted scale
    is non-positive, which signals a disparity-convention prediction: the
    caller retries with 1 / pred.
    """
    mask = np.asarray(mask, dtype=bool)
    p = np.asarray(pred, dtype=np.float64)[mask]
    r = np.asarray(ref, dtype=np.float64)[mask]
    if p.size < MIN_ALIGN_PIXELS:
        raise MetricError(
            f"depth alignment needs >= {MIN_ALIGN_PIXELS} masked pixels, got {p.size}"
        )
    pm = p.mean()
    rm = r.mean()
    var = ((p - pm) ** 2).sum()
    if var == 0.0:
        raise MetricError("depth alignment: prediction is constant over the mask")
    s = ((p - pm) * (r - rm)).sum() / var
    if s <= 0.0:
        raise InvertedDepthError(f"inverted depth (fitted scale {s:.3g})")
    b = rm - s * pm
    return s * np.asarray(pred, dtype=np.float64) + b


def align_depth_auto(pred: np.ndarray, ref: np.ndarray, mask: np.ndarray,
                     convention: str = "depth") -> np.ndarray:
    """align_depth with the disparity retry baked in."""
    pred = np.asarray(pred, dtype=np.float64)
    if convention == "disparity":
        pred = _safe_reciprocal(pred, mask)
        return align_depth(pred, ref, mask)
    try:
        return align_depth(pred, ref, mask)
    except InvertedDepthError:
        return align_depth(_safe_reciprocal(pred, mask), ref, mask)


def _safe_reciprocal(pred: np.ndarray, mask: np.ndarray) -> np.ndarray:
    out = np.zeros_like(pred)
    valid = mask & (pred != 0)
    out[valid] = 1.0 / pred[valid]
    return out


def depth_to_normal(depth: np.ndarray, view: CameraView, mask: np.ndarray):
    """Convert metric depth to a camera-space normal map.

    Each valid pixel is unprojected to a camera-space point; the normal is
    the unit cross product of the central-difference tangents along u and
    v, flipped to face the viewer. Pixels whose 4-neighborhood is not
    fully valid come back invalid.

    Returns (normals (H, W, 3) float64, valid (H, W) bool).
    """
    depth = np.asarray(depth, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    H, W = depth.shape
    cols, rows = np.meshgrid(np.arange(W), np.arange(H))
    u = cols + 0.5
    v = rows + 0.5
    z = np.where(mask, depth, 0.0)
    px = (u - view.cx) / view.fx * z
    py = -(v - view.cy) / view.fy * z
    pz = -z
    P = np.stack([px, py, pz], axis=-1)

    du = np.zeros_like(P)
    dv = np.zeros_like(P)
    du[:, 1:-1] = (P[:, 2:] - P[:, :-2]) / 2.0
    dv[1:-1, :] = (P[2:, :] - P[:-2, :]) / 2.0

    valid = mask.copy()
    valid[:, 0] = valid[:, -1] = False
    valid[0, :] = valid[-1, :] = False
    inner = valid.copy()
    inner[1:-1, 1:-1] &= (
        mask[1:-1, 2:] & mask[1:-1, :-2] & mask[2:, 1:-1] & mask[:-2, 1:-1]
    )
    valid = inner

    n = np.cross(du, dv)
    length = np.linalg.norm(n, axis=-1)
    valid &= length > 1e-12
    normals = np.zeros_like(P)
    normals[valid] = n[valid] / length[valid][:, None]
    # Face the viewer: the viewing ray at a pixel points along P.
    facing_away = np.einsum("hwc,hwc->hw", normals, P) > 0
    normals[facing_away & valid] *= -1.0
    normals[~valid] = 0.0
    return normals, valid
