"""Mesh loading, normalization, and analytic normals.

Generated 3D assets arrive as messy triangle meshes; the engine
normalizes every asset into the [-1, 1] cube before rendering and derives
smooth per-vertex normals for the geometric probes.
"""

import numpy as np

from eval3d.assets import face_normals, load_mesh, normalize_mesh, vertex_normals
from eval3d.localize import write_ply_mesh
from eval3d.primitives import make_cube, make_icosphere

# --- a cube far from the origin gets centered and rescaled ---------------
cube = make_cube(lo=(2, 2, 2), hi=(4, 4, 4))
normalized = normalize_mesh(cube)
lo, hi = normalized.bounds()
print("cube [2,4]^3 normalized ->", lo, hi)

# --- icosphere vertex count follows 10 * 4^n + 2 -------------------------
for n in (1, 2, 3):
    ico = make_icosphere(n)
    print(f"icosphere subdiv {n}: {ico.n_vertices} vertices "
          f"(formula {10 * 4**n + 2}), {ico.n_faces} faces")

# --- analytic normals approach the true sphere normal as we subdivide ----
for n in (2, 3):
    ico = make_icosphere(n)
    vn = vertex_normals(ico)
    radial = ico.vertices / np.linalg.norm(ico.vertices, axis=1, keepdims=True)
    worst = np.degrees(
        np.arccos(np.clip(np.einsum("ij,ij->i", radial, vn), -1, 1))
    ).max()
    print(f"subdiv {n}: worst vertex-normal error vs radial {worst:.3f} deg")

# --- file round trip ------------------------------------------------------
path = "/tmp/eval3d_demo_sphere.ply"
write_ply_mesh(make_icosphere(3), path)
back = load_mesh(path)
print(f"PLY round trip: {back.n_vertices} vertices, {back.n_faces} faces")
fn = face_normals(back)
print("face normals unit-length:", np.allclose(np.linalg.norm(fn, axis=1), 1.0))
