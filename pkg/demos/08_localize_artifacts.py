"""Artifact localization: lifting inconsistency evidence onto the mesh.

Per-pixel geometric evidence (cosine distance between analytic and
predicted normals) back-projects onto every vertex that sees it; semantic
variance is already per-vertex. Both export as vertex-colored PLY heat
maps under a fixed jet palette, so a viewer shows exactly where the asset
is broken.
"""

import numpy as np

from eval3d.assets import normalize_mesh, with_normals
from eval3d.camrig import RigSpec, build_rig
from eval3d.localize import (
    backproject_geo,
    export_heatmap_mesh,
    geo_heat_range,
    semantic_heat,
    semantic_outliers,
    sem_heat_range,
)
from eval3d.primitives import make_icosphere
from eval3d.raster import rasterize, vertex_visibility

mesh = with_normals(normalize_mesh(make_icosphere(3)))
rig = build_rig(RigSpec(n_views=6, resolution=192))
buffers = [rasterize(mesh, v) for v in rig]
visibility = vertex_visibility(mesh, rig, buffers)

# synthetic geometric evidence: one hot patch on view 0, silence elsewhere
maps = []
for buf in buffers:
    ev = np.full(buf.shape, np.nan)
    ev[buf.opacity] = 0.02
    maps.append(ev)
hot_face = int(np.bincount(buffers[0].face_id[buffers[0].face_id >= 0].ravel()).argmax())
maps[0][buffers[0].face_id == hot_face] = 0.9

heat = backproject_geo(mesh, rig, maps, visibility)
hot_vertices = np.nonzero(heat.max > 0.5)[0]
print(f"hot patch on face {hot_face} -> {len(hot_vertices)} hot vertices "
      f"(face corners: {mesh.faces[hot_face].tolist()})")
print(f"heat coverage: {heat.has_data.sum()}/{mesh.n_vertices} vertices have data")

export_heatmap_mesh(mesh, heat, geo_heat_range(23.0), "/tmp/eval3d_demo_geo_heat.ply", "max")
print("geometric heat map -> /tmp/eval3d_demo_geo_heat.ply (jet palette, gray = no data)")

# semantic outliers: fabricate variances with a hot band near one pole
variances = np.where(mesh.vertices[:, 1] > 0.8, 0.5, 0.01)
sem = semantic_heat(mesh.n_vertices, np.arange(mesh.n_vertices), variances)
delta = 0.2
outliers = semantic_outliers(sem, delta)
print(f"\nsemantic outliers above delta={delta}: {int(outliers.sum())} vertices "
      "(the fabricated polar cap)")
export_heatmap_mesh(mesh, sem, sem_heat_range(delta), "/tmp/eval3d_demo_sem_heat.ply")
print("semantic heat map -> /tmp/eval3d_demo_sem_heat.ply")
