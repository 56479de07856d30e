"""Procedural test meshes: cube, icosphere, planar grid."""

from __future__ import annotations

import numpy as np

from .assets import TriMesh

# Box corners 0-3 on the z=lo ring, 4-7 on z=hi; two triangles per side,
# wound so normals point outward.
_CUBE_FACES = [
    (0, 2, 1), (0, 3, 2),  # -z
    (4, 5, 6), (4, 6, 7),  # +z
    (0, 1, 5), (0, 5, 4),  # -y
    (3, 7, 6), (3, 6, 2),  # +y
    (0, 4, 7), (0, 7, 3),  # -x
    (1, 2, 6), (1, 6, 5),  # +x
]


def make_cube(lo=(-1.0, -1.0, -1.0), hi=(1.0, 1.0, 1.0)) -> TriMesh:
    """Axis-aligned box spanning [lo, hi], 8 vertices / 12 triangles."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    vertices = np.array(
        [
            [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
            [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
        ]
    )
    return TriMesh(vertices=vertices, faces=np.array(_CUBE_FACES, dtype=np.int32))


def make_icosphere(subdivisions: int = 3, radius: float = 1.0) -> TriMesh:
    """Icosphere with 10 * 4**n + 2 vertices, all at ``radius`` from origin."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    vertices = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=np.float64,
    )
    vertices /= np.linalg.norm(vertices, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in vertices]

    def midpoint(cache, a, b):
        key = (a, b) if a < b else (b, a)
        if key in cache:
            return cache[key]
        m = np.asarray(verts[a]) + np.asarray(verts[b])
        m /= np.linalg.norm(m)
        verts.append(tuple(m))
        cache[key] = len(verts) - 1
        return cache[key]

    for _ in range(subdivisions):
        cache: dict = {}
        new_faces = []
        for a, b, c in faces:
            ab = midpoint(cache, a, b)
            bc = midpoint(cache, b, c)
            ca = midpoint(cache, c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    vertices = np.asarray(verts) * radius
    return TriMesh(vertices=vertices, faces=np.array(faces, dtype=np.int32))


def make_plane(n: int = 8, extent: float = 1.0, z: float = 0.0) -> TriMesh:
    """Flat (2n^2 faces) grid in the z=const plane, normals facing +z."""
    coords = np.linspace(-extent, extent, n + 1)
    xs, ys = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.stack([xs.ravel(), ys.ravel(), np.full(xs.size, z)], axis=1)
    faces = []
    for r in range(n):
        for c in range(n):
            i = r * (n + 1) + c
            j = i + n + 1
            faces.append((i, i + 1, j + 1))
            faces.append((i, j + 1, j))
    return TriMesh(vertices=vertices, faces=np.array(faces, dtype=np.int32))
