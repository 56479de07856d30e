"""Software z-buffer rasterizer and multi-view vertex visibility.

Produces, per view: camera-space normal map, depth map, opacity mask, and
face-id map. Pure numpy, deterministic: faces are processed in index
order and depth ties keep the earlier (lower-index) face, so identical
inputs give bit-identical buffers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

from .assets import TriMesh, face_normals, vertex_normals
from .camrig import CameraView, project

# Depth-compare slack when testing a vertex against the z-buffer. Glancing
# triangles interpolate depth poorly, so scale with distance.
def depth_epsilon(depth):
    return np.maximum(1e-3, 1e-3 * depth)


@dataclass
class RenderBuffers:
    """Per-view rasterization output.

    normal_map: (H, W, 3) float32, camera space, unit where opaque;
    depth_map: (H, W) float32, +inf where no surface;
    opacity:   (H, W) bool;
    face_id:   (H, W) int32, -1 where no surface.
    """

    normal_map: np.ndarray
    depth_map: np.ndarray
    opacity: np.ndarray
    face_id: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.depth_map.shape


def _edge(px, py, x0, y0, x1, y1):
    return (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)


def _accept_boundary(dx, dy):
    # Top-left fill rule (y grows down): boundary pixels belong to the
    # triangle whose edge is a left edge (dy < 0) or a top edge
    # (dy == 0, dx > 0).
    return dy < 0 or (dy == 0 and dx > 0)


def rasterize(mesh: TriMesh, view: CameraView, shading: str = "vertex") -> RenderBuffers:
    """Z-buffered rasterization with perspective-correct interpolation.

    shading "vertex": per-pixel interpolated vertex normals, renormalized;
    shading "flat": constant face normal. No back-face culling, but any
    stored normal facing away from the camera is negated so that opaque
    pixels always carry a viewer-facing normal.

    Triangles with a vertex at or behind the near plane are skipped; the
    engine only renders assets normalized into [-1, 1]^3 with rigs whose
    near plane never intersects them.
    """
    if shading not in ("vertex", "flat"):
        raise ValueError(f"unknown shading mode: {shading}")
    H, W = view.height, view.width
    R = view.rotation

    u, v, z, _ = project(view, mesh.vertices)
    fn_cam = (mesh.face_normals if mesh.face_normals is not None else face_normals(mesh)) @ R.T
    if shading == "vertex":
        vn = mesh.vertex_normals if mesh.vertex_normals is not None else vertex_normals(mesh)
        vn_cam = vn @ R.T

    zbuf = np.full((H, W), np.inf)
    fid = np.full((H, W), -1, dtype=np.int32)
    nbuf = np.zeros((H, W, 3))

    faces = mesh.faces
    for f_idx in range(len(faces)):
        ia, ib, ic = faces[f_idx]
        if z[ia] <= view.near or z[ib] <= view.near or z[ic] <= view.near:
            continue
        ax, ay, az_ = u[ia], v[ia], z[ia]
        bx, by, bz = u[ib], v[ib], z[ib]
        cx, cy, cz = u[ic], v[ic], z[ic]

        area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if area2 == 0.0:
            continue
        if area2 < 0.0:
            ib, ic = ic, ib
            bx, by, bz, cx, cy, cz = cx, cy, cz, bx, by, bz
            area2 = -area2

        lo_c = max(0, int(np.floor(min(ax, bx, cx) - 0.5)) )
        hi_c = min(W - 1, int(np.ceil(max(ax, bx, cx) - 0.5)))
        lo_r = max(0, int(np.floor(min(ay, by, cy) - 0.5)))
        hi_r = min(H - 1, int(np.ceil(max(ay, by, cy) - 0.5)))
        if hi_c < lo_c or hi_r < lo_r:
            continue

        px = np.arange(lo_c, hi_c + 1) + 0.5
        py = (np.arange(lo_r, hi_r + 1) + 0.5)[:, None]
        w0 = _edge(px, py, bx, by, cx, cy)
        w1 = _edge(px, py, cx, cy, ax, ay)
        w2 = _edge(px, py, ax, ay, bx, by)

        inside = np.ones(w0.shape, dtype=bool)
        for w, dx, dy in (
            (w0, cx - bx, cy - by),
            (w1, ax - cx, ay - cy),
            (w2, bx - ax, by - ay),
        ):
            if _accept_boundary(dx, dy):
                inside &= w >= 0
            else:
                inside &= w > 0
        if not inside.any():
            continue

        b0 = w0 / area2
        b1 = w1 / area2
        b2 = w2 / area2
        q0 = b0 / az_
        q1 = b1 / bz
        q2 = b2 / cz
        denom = q0 + q1 + q2
        z_pix = 1.0 / denom

        tile = zbuf[lo_r : hi_r + 1, lo_c : hi_c + 1]
        win = inside & (z_pix < view.far) & (z_pix < tile)
        if not win.any():
            continue

        if shading == "flat":
            normal = np.broadcast_to(fn_cam[f_idx], (*win.shape, 3))[win]
        else:
            na, nb, nc = vn_cam[ia], vn_cam[ib], vn_cam[ic]
            num = (
                q0[..., None] * na + q1[..., None] * nb + q2[..., None] * nc
            ) * z_pix[..., None]
            normal = num[win]
            length = np.linalg.norm(normal, axis=1, keepdims=True)
            bad = length[:, 0] < 1e-8
            if bad.any():
                normal[bad] = fn_cam[f_idx]
                length[bad] = 1.0
            normal = normal / length

        rows, cols = np.nonzero(win)
        rows += lo_r
        cols += lo_c
        zbuf[rows, cols] = z_pix[win]
        fid[rows, cols] = f_idx
        nbuf[rows, cols] = normal

    opacity = np.isfinite(zbuf)
    # Flip normals that face away from the camera: compare against the
    # per-pixel viewing ray, not the optical axis.
    rr, cc = np.nonzero(opacity)
    if len(rr):
        d = zbuf[rr, cc]
        x = (cc + 0.5 - view.cx) / view.fx * d
        y = -(rr + 0.5 - view.cy) / view.fy * d
        ray = np.stack([x, y, -d], axis=1)
        flip = np.einsum("ij,ij->i", nbuf[rr, cc], ray) > 0
        if flip.any():
            sel = (rr[flip], cc[flip])
            nbuf[sel] = -nbuf[sel]

    depth = zbuf.astype(np.float32)
    depth[~opacity] = np.inf
    return RenderBuffers(
        normal_map=nbuf.astype(np.float32),
        depth_map=depth,
        opacity=opacity,
        face_id=fid,
    )


@dataclass
class VisibilityTable:
    """Per-vertex visibility across a rig.

    flags: (V, n_views) bool; counts: (V,) = flags.sum(axis=1).
    """

    flags: np.ndarray
    counts: np.ndarray

    @property
    def n_views(self) -> int:
        return self.flags.shape[1]


def _reference_depth(buf: RenderBuffers, u: np.ndarray, v: np.ndarray):
    """Bilinear z-buffer sample at (u, v) over valid pixels only.

    Weights of empty pixels are dropped and the rest renormalized, so a
    vertex on the surface boundary (whose own pixel center the surface
    may miss) still reads the depth of its covered neighbors. Returns
    (depth, ok); ok is False when the whole 2x2 neighborhood is empty.
    """
    H, W = buf.depth_map.shape
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
        vals = buf.depth_map[ys, xs].astype(np.float64)
        good = np.isfinite(vals)
        total += np.where(good, vals * w, 0.0)
        weight += np.where(good, w, 0.0)
    ok = weight > 1e-12
    depth = np.full(u.shape, np.inf)
    depth[ok] = total[ok] / weight[ok]
    return depth, ok


def _incident_faces(mesh: TriMesh):
    lists: list[list[int]] = [[] for _ in range(mesh.n_vertices)]
    for f_idx, face in enumerate(mesh.faces):
        for vid in face:
            lists[vid].append(f_idx)
    return [set(l) for l in lists]


def vertex_visibility(
    mesh: TriMesh, rig: list[CameraView], buffers: list[RenderBuffers]
) -> VisibilityTable:
    """A vertex is visible in a view when it projects in-frustum and its
    camera depth is within epsilon of the z-buffer sampled at its pixel
    (valid-masked bilinear, see _reference_depth).

    The depth test is unreliable exactly on the silhouette: there the
    surface is glancing and the z-buffer changes by far more than epsilon
    within a pixel (and a sharp triangle corner may cover no pixel center
    at all). A vertex failing the depth test is therefore still visible
    when the rasterizer drew one of its own incident faces within 2 px of
    its projection; occluded vertices never get such pixels because their
    faces lose the z-test.
    """
    if len(rig) != len(buffers):
        raise ValueError("one RenderBuffers per rig view required")
    V = mesh.n_vertices
    flags = np.zeros((V, len(rig)), dtype=bool)
    incident = _incident_faces(mesh)
    for k, (view, buf) in enumerate(zip(rig, buffers)):
        u, v, z, ok = project(view, mesh.vertices)
        zb, has_ref = _reference_depth(buf, u, v)
        vis = ok & has_ref & (z <= zb + depth_epsilon(z))
        H, W = buf.shape
        for idx in np.nonzero(ok & ~vis)[0]:
            r = int(np.floor(v[idx]))
            c = int(np.floor(u[idx]))
            r0, r1 = max(0, r - 2), min(H, r + 3)
            c0, c1 = max(0, c - 2), min(W, c + 3)
            window = buf.face_id[r0:r1, c0:c1]
            if incident[idx].intersection(window[window >= 0].tolist()):
                vis[idx] = True
        flags[:, k] = vis
    return VisibilityTable(flags=flags, counts=flags.sum(axis=1))


def normal_to_rgb8(normal_map: np.ndarray, opacity: np.ndarray) -> np.ndarray:
    """Colorize a normal map into uint8 RGB ((n+1)/2 scaling, black background)."""
    rgb = np.zeros((*opacity.shape, 3), dtype=np.uint8)
    n = np.clip((normal_map + 1.0) / 2.0, 0.0, 1.0)
    rgb[opacity] = np.round(n[opacity] * 255.0).astype(np.uint8)
    return rgb


def save_normal_png(buffers: RenderBuffers, path) -> None:
    Image.fromarray(normal_to_rgb8(buffers.normal_map, buffers.opacity)).save(path)


def save_opacity_png(buffers: RenderBuffers, path) -> None:
    Image.fromarray((buffers.opacity * np.uint8(255))).save(path)
