"""Triangle mesh loading, validation, normalization, and analytic normals.

Meshes are plain vertex/face arrays. Generated meshes are frequently
non-manifold, non-watertight, and inconsistently wound; none of that is
treated as an error here. Only empty or fully degenerate meshes are
rejected.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MeshError

DEGENERATE_AREA = 1e-12


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Immutable triangle mesh.

    vertices: (V, 3) float64, faces: (F, 3) int32 indices into vertices.
    Normal arrays are optional; rows of ``vertex_normals`` may be zero for
    vertices that belong to no face (see :func:`vertex_normals`).
    """

    vertices: np.ndarray
    faces: np.ndarray
    vertex_normals: np.ndarray | None = None
    face_normals: np.ndarray | None = None

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        f = np.ascontiguousarray(np.asarray(self.faces, dtype=np.int32))
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError(f"vertices must be (V, 3), got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 3:
            raise MeshError(f"faces must be (F, 3), got {f.shape}")
        if len(f) == 0:
            raise MeshError("empty mesh")
        if f.min() < 0 or f.max() >= len(v):
            raise MeshError(
                f"face index out of range: max {f.max()} for {len(v)} vertices"
            )
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)
        for name in ("vertex_normals", "face_normals"):
            n = getattr(self, name)
            if n is not None:
                n = np.ascontiguousarray(np.asarray(n, dtype=np.float64))
                n.setflags(write=False)
                object.__setattr__(self, name, n)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _triangle_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    a = vertices[faces[:, 0]]
    e1 = vertices[faces[:, 1]] - a
    e2 = vertices[faces[:, 2]] - a
    return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def load_mesh(path: str | Path) -> TriMesh:
    """Load an OBJ (ascii) or PLY (ascii / binary little-endian) mesh.

    Polygonal faces are fan-triangulated. Attributes other than positions
    and per-vertex normals are ignored. Raises MeshError("empty mesh") when
    the file holds no faces.
    """
    path = Path(path)
    if not path.exists():
        raise MeshError(f"no such file: {path}")
    head = path.open("rb").read(4)
    if head[:3] == b"ply":
        vertices, faces, normals = _load_ply(path)
    else:
        vertices, faces, normals = _load_obj(path)
    if len(faces) == 0:
        raise MeshError("empty mesh")
    return TriMesh(
        vertices=np.asarray(vertices, dtype=np.float64),
        faces=np.asarray(faces, dtype=np.int32),
        vertex_normals=normals,
    )


def _fan(indices: list[int]) -> list[tuple[int, int, int]]:
    return [(indices[0], indices[k], indices[k + 1]) for k in range(1, len(indices) - 1)]


def _load_obj(path: Path):
    vertices: list[list[float]] = []
    vn: list[list[float]] = []
    faces: list[tuple[int, int, int]] = []
    face_normal_idx: list[tuple[int, ...]] = []
    with path.open("r", errors="replace") as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            tag = parts[0]
            if tag == "v":
                vertices.append([float(x) for x in parts[1:4]])
            elif tag == "vn":
                vn.append([float(x) for x in parts[1:4]])
            elif tag == "f":
                idx = []
                nidx = []
                for token in parts[1:]:
                    fields = token.split("/")
                    i = int(fields[0])
                    idx.append(i - 1 if i > 0 else len(vertices) + i)
                    if len(fields) == 3 and fields[2]:
                        j = int(fields[2])
                        nidx.append(j - 1 if j > 0 else len(vn) + j)
                tris = _fan(idx)
                faces.extend(tris)
                if len(nidx) == len(idx):
                    face_normal_idx.extend(_fan(nidx))
    normals = None
    # Adopt OBJ normals only in the unambiguous per-vertex case: one normal
    # per vertex and every face referencing normal k for vertex k.
    if vn and len(vn) == len(vertices) and len(face_normal_idx) == len(faces):
        if all(fn == fv for fn, fv in zip(face_normal_idx, faces)):
            normals = np.asarray(vn, dtype=np.float64)
    return np.asarray(vertices, dtype=np.float64).reshape(-1, 3), faces, normals


_PLY_TYPES = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}


def _load_ply(path: Path):
    with path.open("rb") as fh:
        if fh.readline().strip() != b"ply":
            raise MeshError(f"not a PLY file: {path}")
        fmt = None
        elements: list[tuple[str, int, list]] = []  # (name, count, [props])
        while True:
            line = fh.readline()
            if not line:
                raise MeshError("unterminated PLY header")
            tokens = line.decode("ascii", errors="replace").split()
            if not tokens or tokens[0] == "comment":
                continue
            if tokens[0] == "format":
                fmt = tokens[1]
            elif tokens[0] == "element":
                elements.append((tokens[1], int(tokens[2]), []))
            elif tokens[0] == "property":
                if tokens[1] == "list":
                    elements[-1][2].append(("list", tokens[2], tokens[3], tokens[4]))
                else:
                    elements[-1][2].append(("scalar", tokens[1], tokens[2]))
            elif tokens[0] == "end_header":
                break
        if fmt not in ("ascii", "binary_little_endian"):
            raise MeshError(f"unsupported PLY format: {fmt}")
        if fmt == "ascii":
            return _read_ply_ascii(fh, elements)
        return _read_ply_binary(fh, elements)


def _vertex_columns(props):
    names = [p[2] for p in props if p[0] == "scalar"]
    for want in ("x", "y", "z"):
        if want not in names:
            raise MeshError(f"PLY vertex element lacks property {want}")
    has_normals = all(n in names for n in ("nx", "ny", "nz"))
    return names, has_normals


def _read_ply_ascii(fh, elements):
    vertices = None
    normals = None
    faces: list[tuple[int, int, int]] = []
    text = fh.read().decode("ascii", errors="replace").split("\n")
    row = 0
    lines = [ln.split() for ln in text if ln.strip()]
    for name, count, props in elements:
        if name == "vertex":
            names, has_normals = _vertex_columns(props)
            data = np.asarray(
                [[float(x) for x in lines[row + i]] for i in range(count)]
            )
            row += count
            cols = {n: k for k, n in enumerate(names)}
            vertices = data[:, [cols["x"], cols["y"], cols["z"]]]
            if has_normals:
                normals = data[:, [cols["nx"], cols["ny"], cols["nz"]]]
        elif name == "face":
            for i in range(count):
                tok = lines[row + i]
                n = int(tok[0])
                faces.extend(_fan([int(t) for t in tok[1 : 1 + n]]))
            row += count
        else:
            row += count
    if vertices is None:
        raise MeshError("PLY file has no vertex element")
    return vertices, faces, normals


def _read_ply_binary(fh, elements):
    vertices = None
    normals = None
    faces: list[tuple[int, int, int]] = []
    for name, count, props in elements:
        has_list = any(p[0] == "list" for p in props)
        if not has_list:
            dtype = np.dtype(
                [(p[2], "<" + _PLY_TYPES[p[1]]) for p in props]
            )
            raw = fh.read(dtype.itemsize * count)
            if len(raw) < dtype.itemsize * count:
                raise MeshError(f"truncated PLY element {name}")
            data = np.frombuffer(raw, dtype=dtype)
            if name == "vertex":
                _, has_normals = _vertex_columns(props)
                vertices = np.stack(
                    [data["x"], data["y"], data["z"]], axis=1
                ).astype(np.float64)
                if has_normals:
                    normals = np.stack(
                        [data["nx"], data["ny"], data["nz"]], axis=1
                    ).astype(np.float64)
        else:
            if len(props) != 1:
                raise MeshError(
                    f"PLY element {name}: mixed list/scalar properties unsupported"
                )
            _, count_t, index_t, _ = props[0]
            count_dt = np.dtype("<" + _PLY_TYPES[count_t])
            index_dt = np.dtype("<" + _PLY_TYPES[index_t])
            for _ in range(count):
                raw = fh.read(count_dt.itemsize)
                if len(raw) < count_dt.itemsize:
                    raise MeshError(f"truncated PLY element {name}")
                n = int(np.frombuffer(raw, dtype=count_dt)[0])
                raw = fh.read(index_dt.itemsize * n)
                if len(raw) < index_dt.itemsize * n:
                    raise MeshError(f"truncated PLY element {name}")
                idx = np.frombuffer(raw, dtype=index_dt).astype(np.int64)
                if name == "face":
                    faces.extend(_fan(list(idx)))
    if vertices is None:
        raise MeshError("PLY file has no vertex element")
    return vertices, faces, normals


def normalize_mesh(mesh: TriMesh) -> TriMesh:
    """Center the bounding box at the origin and scale so max extent is 2.

    All coordinates end up in [-1, 1]. Faces degenerate after scaling
    (area below 1e-12) are dropped; a mesh with no surviving face is an
    error. Idempotent to 1e-9.
    """
    lo, hi = mesh.bounds()
    extent = float((hi - lo).max())
    if extent <= 0:
        raise MeshError("mesh has zero extent along every axis")
    center = (hi + lo) / 2.0
    scale = 2.0 / extent
    vertices = (mesh.vertices - center) * scale
    areas = _triangle_areas(vertices, mesh.faces)
    keep = areas >= DEGENERATE_AREA
    if not keep.any():
        raise MeshError("all faces degenerate after normalization")
    faces = mesh.faces[keep]
    vn = mesh.vertex_normals
    return TriMesh(vertices=vertices, faces=faces, vertex_normals=vn)


def face_normals(mesh: TriMesh) -> np.ndarray:
    """Right-hand-rule unit normal of each face, (F, 3)."""
    a = mesh.vertices[mesh.faces[:, 0]]
    e1 = mesh.vertices[mesh.faces[:, 1]] - a
    e2 = mesh.vertices[mesh.faces[:, 2]] - a
    n = np.cross(e1, e2)
    length = np.linalg.norm(n, axis=1, keepdims=True)
    length[length == 0] = 1.0
    return n / length


def vertex_normals(mesh: TriMesh) -> np.ndarray:
    """Angle-weighted average of incident face normals, renormalized.

    Vertices that belong to no face get a zero row; treat those as invalid
    (see :func:`vertex_normal_valid`).
    """
    fn = mesh.face_normals if mesh.face_normals is not None else face_normals(mesh)
    v = mesh.vertices
    f = mesh.faces
    acc = np.zeros((len(v), 3))
    corners = v[f]  # (F, 3, 3)
    for k in range(3):
        e1 = corners[:, (k + 1) % 3] - corners[:, k]
        e2 = corners[:, (k + 2) % 3] - corners[:, k]
        n1 = np.linalg.norm(e1, axis=1)
        n2 = np.linalg.norm(e2, axis=1)
        denom = np.maximum(n1 * n2, 1e-300)
        cos = np.clip((e1 * e2).sum(axis=1) / denom, -1.0, 1.0)
        angle = np.arccos(cos)
        np.add.at(acc, f[:, k], fn * angle[:, None])
    length = np.linalg.norm(acc, axis=1, keepdims=True)
    out = np.divide(acc, length, out=np.zeros_like(acc), where=length > 0)
    return out


def vertex_normal_valid(normals: np.ndarray) -> np.ndarray:
    """Boolean mask of rows holding a real (unit) normal."""
    return np.linalg.norm(normals, axis=1) > 0.5


def with_normals(mesh: TriMesh) -> TriMesh:
    """Return a copy carrying both face and vertex normals."""
    fn = face_normals(mesh)
    tmp = TriMesh(mesh.vertices, mesh.faces, face_normals=fn)
    vn = mesh.vertex_normals if mesh.vertex_normals is not None else vertex_normals(tmp)
    return TriMesh(mesh.vertices, mesh.faces, vertex_normals=vn, face_normals=fn)
