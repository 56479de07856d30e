"""Semantic consistency: multi-view variance of per-vertex dense features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..assets import TriMesh
from ..camrig import CameraView, project
from ..errors import MetricError
from ..raster import VisibilityTable
from .common import MetricScore

DEFAULT_MIN_VISIBILITY = 5


@dataclass
class SemConfig:
    delta_dino: float = 1.0  # feature-variance threshold; calibrate per model set
    min_visibility: int = DEFAULT_MIN_VISIBILITY

    def __post_init__(self):
        if self.delta_dino <= 0:
            raise MetricError(f"delta_dino must be positive: {self.delta_dino}")


def bilinear_sample(fmap: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sample (C, H, W) maps at continuous (x, y); pixel centers sit at
    half-integer coordinates, samples clamp to the border."""
    C, H, W = fmap.shape
    xi = np.clip(x - 0.5, 0.0, W - 1.0)
    yi = np.clip(y - 0.5, 0.0, H - 1.0)
    x0 = np.floor(xi).astype(np.int64)
    y0 = np.floor(yi).astype(np.int64)
    x1 = np.minimum(x0 + 1, W - 1)
    y1 = np.minimum(y0 + 1, H - 1)
    fx = xi - x0
    fy = yi - y0
    w00 = (1 - fx) * (1 - fy)
    w10 = fx * (1 - fy)
    w01 = (1 - fx) * fy
    w11 = fx * fy
    return (
        fmap[:, y0, x0] * w00
        + fmap[:, y0, x1] * w10
        + fmap[:, y1, x0] * w01
        + fmap[:, y1, x1] * w11
    ).T  # (N, C)


def fuse_vertex_features(
    mesh: TriMesh,
    rig: list[CameraView],
    feature_maps: list[np.ndarray],
    visibility: VisibilityTable,
    min_visibility: int = DEFAULT_MIN_VISIBILITY,
):
    """Collect per-vertex feature samples from every view that sees them.

    Feature maps are (C, Hf, Wf) and may be coarser than the render;
    projected pixel coordinates are rescaled accordingly and sampled
    bilinearly. Only vertices visible in at least ``min_visibility`` views
    are kept.

    Returns (vertex_ids (N,), samples list of (n_views_seen, C) arrays).
    """
    if len(rig) != len(feature_maps):
        raise MetricError("one feature map per rig view required")
    if visibility.flags.shape != (mesh.n_vertices, len(rig)):
        raise MetricError("visibility table does not match mesh/rig")
    keep = visibility.counts >= min_visibility
    if not keep.any():
        raise MetricError(
            f"no vertex visible from >= {min_visibility} views"
        )
    vertex_ids = np.nonzero(keep)[0]
    per_view_samples = []
    for k, (view, fmap) in enumerate(zip(rig, feature_maps)):
        fmap = np.asarray(fmap, dtype=np.float64)
        if fmap.ndim != 3:
            raise MetricError(f"feature map must be (C, H, W), got {fmap.shape}")
        u, v, _, _ = project(view, mesh.vertices[vertex_ids])
        sx = fmap.shape[2] / view.width
        sy = fmap.shape[1] / view.height
        per_view_samples.append(bilinear_sample(fmap, u * sx, v * sy))
    flags = visibility.flags[vertex_ids]
    samples = []
    for row, vid in enumerate(vertex_ids):
        seen = np.nonzero(flags[row])[0]
        samples.append(np.stack([per_view_samples[k][row] for k in seen]))
    return vertex_ids, samples


def mean_channel_variance(samples: np.ndarray) -> float:
    """Population variance per channel across views, then mean over channels."""
    var = samples.var(axis=0, ddof=0)
    return float(var.mean())


def semantic_consistency(
    vertex_ids: np.ndarray,
    samples: list[np.ndarray],
    cfg: SemConfig,
) -> MetricScore:
    """Ratio of kept vertices whose mean feature variance stays under the
    threshold."""
    if len(samples) == 0:
        raise MetricError("no vertices to score")
    variances = np.array([mean_channel_variance(s) for s in samples])
    below = variances < cfg.delta_dino
    value = 100.0 * below.sum() / len(variances)
    return MetricScore(
        name="semantic_consistency",
        value=float(value),
        evidence={
            "vertex_ids": np.asarray(vertex_ids),
            "vertex_variance": variances,
            "threshold": cfg.delta_dino,
        },
    )


def calibrate_semantic_threshold(variances) -> float:
    """70th percentile (linear interpolation) of pooled per-vertex variances."""
    pooled = np.concatenate([np.atleast_1d(np.asarray(v, dtype=np.float64)) for v in variances]) \
        if isinstance(variances, (list, tuple)) else np.asarray(variances, dtype=np.float64).ravel()
    if pooled.size < 100:
        raise MetricError(
            f"threshold calibration needs >= 100 samples, got {pooled.size}"
        )
    return float(np.percentile(pooled, 70.0))
