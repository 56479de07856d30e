"""Lift per-pixel/per-vertex inconsistency evidence onto the mesh surface.

Geometric evidence (per-view cosine-distance maps) is back-projected to
each visible vertex; semantic evidence is already per-vertex. Heat maps
export as vertex-colored binary PLY under a fixed 256-entry jet table so
the colors are bit-reproducible.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .assets import TriMesh
from .camrig import CameraView, project
from .errors import MetricError
from .raster import VisibilityTable

NO_DATA_GRAY = (128, 128, 128)


def jet_table() -> np.ndarray:
    """Classic 256-entry jet lookup table, (256, 3) uint8.

    Endpoints are pinned by tests: entry 0 = (0, 0, 131) dark blue,
    entry 255 = (128, 0, 0) dark red.
    """
    m, n = 256, 64
    ramp = np.concatenate(
        [np.arange(1, n + 1) / n, np.ones(n - 1), np.arange(n, 0, -1) / n]
    )
    pos = np.arange(1, len(ramp) + 1)
    g = 32 + pos
    r = g + n
    b = g - n
    lut = np.zeros((m, 3))
    rk = r[r <= m]
    lut[rk - 1, 0] = ramp[: len(rk)]
    gk = g[g <= m]
    lut[gk - 1, 1] = ramp[: len(gk)]
    bk = b[b >= 1]
    lut[bk - 1, 2] = ramp[len(ramp) - len(bk):]
    return np.round(lut * 255.0).astype(np.uint8)


JET = jet_table()


@dataclass
class VertexHeat:
    """Per-vertex artifact intensity with mean and max aggregations."""

    mean: np.ndarray
    max: np.ndarray
    has_data: np.ndarray

    def __post_init__(self):
        if not (len(self.mean) == len(self.max) == len(self.has_data)):
            raise MetricError("heat arrays must share length")


def _masked_bilinear(evidence: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Bilinear sample over valid (finite) pixels; weights of invalid
    neighbors are dropped and the rest renormalized. Returns (values,
    ok) where ok is False when all four neighbors are invalid."""
    H, W = evidence.shape
    xi = np.clip(u - 0.5, 0.0, W - 1.0)
    yi = np.clip(v - 0.5, 0.0, H - 1.0)
    x0 = np.floor(xi).astype(np.int64)
    y0 = np.floor(yi).astype(np.int64)
    x1 = np.minimum(x0 + 1, W - 1)
    y1 = np.minimum(y0 + 1, H - 1)
    fx = xi - x0
    fy = yi - y0
    total = np.zeros(u.shape)
    weight = np.zeros(u.shape)
    for xs, ys, w in (
        (x0, y0, (1 - fx) * (1 - fy)),
        (x1, y0, fx * (1 - fy)),
        (x0, y1, (1 - fx) * fy),
        (x1, y1, fx * fy),
    ):
        vals = evidence[ys, xs]
        good = np.isfinite(vals)
        total += np.where(good, vals * w, 0.0)
        weight += np.where(good, w, 0.0)
    ok = weight > 1e-12
    values = np.zeros(u.shape)
    values[ok] = total[ok] / weight[ok]
    return values, ok


def backproject_geo(
    mesh: TriMesh,
    rig: list[CameraView],
    evidence_maps: list[np.ndarray],
    visibility: VisibilityTable,
) -> VertexHeat:
    """Back-project per-view cosine-distance maps onto mesh vertices.

    For each vertex and each view where it is visible, the evidence map is
    sampled bilinearly at its projected pixel (NaN pixels carry no
    weight); samples aggregate to mean and max. Vertices with no sample
    anywhere are flagged has_data=False.
    """
    V = mesh.n_vertices
    if visibility.flags.shape != (V, len(rig)):
        raise MetricError("visibility table does not match mesh/rig")
    if len(evidence_maps) != len(rig):
        raise MetricError("one evidence map per rig view required")
    sum_heat = np.zeros(V)
    max_heat = np.zeros(V)
    count = np.zeros(V, dtype=np.int64)
    for k, (view, evidence) in enumerate(zip(rig, evidence_maps)):
        vis = visibility.flags[:, k]
        if not vis.any():
            continue
        ids = np.nonzero(vis)[0]
        u, v, _, _ = project(view, mesh.vertices[ids])
        values, ok = _masked_bilinear(np.asarray(evidence, dtype=np.float64), u, v)
        ids = ids[ok]
        values = values[ok]
        sum_heat[ids] += values
        np.maximum.at(max_heat, ids, values)
        count[ids] += 1
    has_data = count > 0
    mean_heat = np.zeros(V)
    mean_heat[has_data] = sum_heat[has_data] / count[has_data]
    max_heat[~has_data] = 0.0
    return VertexHeat(mean=mean_heat, max=max_heat, has_data=has_data)


def semantic_heat(
    n_vertices: int, vertex_ids: np.ndarray, variances: np.ndarray
) -> VertexHeat:
    """Spread per-vertex semantic variances onto the full vertex set."""
    mean = np.zeros(n_vertices)
    has_data = np.zeros(n_vertices, dtype=bool)
    mean[vertex_ids] = variances
    has_data[vertex_ids] = True
    return VertexHeat(mean=mean, max=mean.copy(), has_data=has_data)


def semantic_outliers(heat: VertexHeat, delta: float) -> np.ndarray:
    """Vertices whose variance strictly exceeds the threshold; no-data
    vertices never qualify."""
    return heat.has_data & (heat.mean > delta)


def heat_to_colors(
    heat_values: np.ndarray, has_data: np.ndarray, lo: float, hi: float
) -> np.ndarray:
    """Map heat into the jet table; no-data vertices render gray."""
    if lo >= hi:
        raise MetricError(f"bad heat range: ({lo}, {hi})")
    t = np.clip((heat_values - lo) / (hi - lo), 0.0, 1.0)
    idx = np.round(t * 255.0).astype(np.int64)
    colors = JET[idx].copy()
    colors[~has_data] = NO_DATA_GRAY
    return colors


def export_heatmap_mesh(
    mesh: TriMesh,
    heat: VertexHeat,
    heat_range: tuple,
    path: str | Path,
    aggregate: str = "mean",
) -> None:
    """Write a vertex-colored binary little-endian PLY heat map."""
    if aggregate not in ("mean", "max"):
        raise MetricError(f"aggregate must be mean or max: {aggregate}")
    values = heat.mean if aggregate == "mean" else heat.max
    if not np.isfinite(values[heat.has_data]).all():
        raise MetricError("heat values must be finite")
    colors = heat_to_colors(values, heat.has_data, *heat_range)
    write_ply_with_colors(mesh, colors, path)


def write_ply_with_colors(mesh: TriMesh, colors: np.ndarray, path: str | Path) -> None:
    header = "\n".join(
        [
            "ply",
            "format binary_little_endian 1.0",
            f"element vertex {mesh.n_vertices}",
            "property float x",
            "property float y",
            "property float z",
            "property uchar red",
            "property uchar green",
            "property uchar blue",
            f"element face {mesh.n_faces}",
            "property list uchar int vertex_indices",
            "end_header",
            "",
        ]
    )
    vertex_dt = np.dtype(
        [("x", "<f4"), ("y", "<f4"), ("z", "<f4"),
         ("red", "u1"), ("green", "u1"), ("blue", "u1")]
    )
    vbuf = np.empty(mesh.n_vertices, dtype=vertex_dt)
    pos = mesh.vertices.astype("<f4")
    vbuf["x"], vbuf["y"], vbuf["z"] = pos[:, 0], pos[:, 1], pos[:, 2]
    vbuf["red"], vbuf["green"], vbuf["blue"] = colors[:, 0], colors[:, 1], colors[:, 2]
    face_dt = np.dtype([("n", "u1"), ("a", "<i4"), ("b", "<i4"), ("c", "<i4")])
    fbuf = np.empty(mesh.n_faces, dtype=face_dt)
    fbuf["n"] = 3
    fbuf["a"], fbuf["b"], fbuf["c"] = mesh.faces[:, 0], mesh.faces[:, 1], mesh.faces[:, 2]
    with Path(path).open("wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(vbuf.tobytes())
        fh.write(fbuf.tobytes())


def write_ply_mesh(mesh: TriMesh, path: str | Path) -> None:
    """Plain binary PLY (positions + faces), used for fixtures."""
    header = "\n".join(
        [
            "ply",
            "format binary_little_endian 1.0",
            f"element vertex {mesh.n_vertices}",
            "property float x",
            "property float y",
            "property float z",
            f"element face {mesh.n_faces}",
            "property list uchar int vertex_indices",
            "end_header",
            "",
        ]
    )
    with Path(path).open("wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(mesh.vertices.astype("<f4").tobytes())
        face_dt = np.dtype([("n", "u1"), ("a", "<i4"), ("b", "<i4"), ("c", "<i4")])
        fbuf = np.empty(mesh.n_faces, dtype=face_dt)
        fbuf["n"] = 3
        fbuf["a"], fbuf["b"], fbuf["c"] = mesh.faces[:, 0], mesh.faces[:, 1], mesh.faces[:, 2]
        fh.write(fbuf.tobytes())


def geo_heat_range(delta_norm_deg: float = 23.0) -> tuple:
    """Default geometric heat range: the inlier threshold's cosine
    distance sits a quarter of the way up the scale."""
    return (0.0, (1.0 - np.cos(np.radians(delta_norm_deg))) * 4.0)


def sem_heat_range(delta_dino: float) -> tuple:
    """Default semantic heat range: threshold at mid-scale."""
    return (0.0, 2.0 * delta_dino)
