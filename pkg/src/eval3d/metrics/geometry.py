"""Geometric consistency: inlier ratio of analytic vs predicted normals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import MetricError
from .common import MetricScore

DEFAULT_ANGLE_THRESHOLD_DEG = 23.0


@dataclass
class GeoConfig:
    delta_norm: float = DEFAULT_ANGLE_THRESHOLD_DEG  # degrees
    per_view_mean: bool = False  # False: pool pixels across views

    def __post_init__(self):
        if not 0.0 < self.delta_norm < 90.0:
            raise MetricError(f"delta_norm must be in (0, 90): {self.delta_norm}")


def angular_difference_deg(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dot = np.clip(np.einsum("...c,...c->...", a, b), -1.0, 1.0)
    return np.degrees(np.arccos(dot))


def geometric_consistency(
    analytic: list[np.ndarray],
    predicted: list[np.ndarray],
    masks: list[np.ndarray],
    cfg: GeoConfig | None = None,
) -> MetricScore:
    """Percentage of valid pixels whose normal pair agrees within the
    angular threshold.

    ``analytic``/``predicted`` are per-view (H, W, 3) camera-space normal
    maps; a pixel is valid where ``masks`` is set (opaque and both
    normals defined). Pixels pool across views by default; per-view means
    are available via the config. Evidence carries the per-view angular
    and cosine-distance maps (invalid pixels are NaN).
    """
    cfg = cfg or GeoConfig()
    if not (len(analytic) == len(predicted) == len(masks)) or not analytic:
        raise MetricError("per-view normal maps and masks must align")
    angle_maps = []
    cosine_maps = []
    inliers = 0
    total = 0
    per_view_ratio = []
    for na, npred, m in zip(analytic, predicted, masks):
        if na.shape != npred.shape or na.shape[:2] != m.shape:
            raise MetricError("normal map shapes disagree")
        ang = np.full(m.shape, np.nan)
        cosd = np.full(m.shape, np.nan)
        dot = np.clip(np.einsum("hwc,hwc->hw", na, npred), -1.0, 1.0)
        ang[m] = np.degrees(np.arccos(dot[m]))
        cosd[m] = 1.0 - dot[m]
        angle_maps.append(ang)
        cosine_maps.append(cosd)
        n_in = int((ang[m] < cfg.delta_norm).sum())
        n_tot = int(m.sum())
        inliers += n_in
        total += n_tot
        per_view_ratio.append(n_in / n_tot if n_tot else np.nan)
    if total == 0:
        raise MetricError("no valid pixels")
    if cfg.per_view_mean:
        ratios = [r for r in per_view_ratio if np.isfinite(r)]
        value = 100.0 * float(np.mean(ratios))
    else:
        value = 100.0 * inliers / total
    return MetricScore(
        name="geometric_consistency",
        value=value,
        evidence={
            "angle_maps_deg": angle_maps,
            "cosine_distance_maps": cosine_maps,
            "per_view_inlier_ratio": per_view_ratio,
            "n_valid_pixels": total,
        },
    )
