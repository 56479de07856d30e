"""eval3d: multi-view consistency scoring for generated 3D assets.

The engine renders an asset from a camera rig, probes it with pluggable
sidecar backends (depth, dense features, novel-view synthesis, perceptual
distance, question generation, VQA, aesthetics), and reduces the evidence
into five 0-100% scores plus per-pixel / per-vertex artifact maps.
"""

__version__ = "0.1.0"

from .assets import TriMesh, load_mesh, normalize_mesh, face_normals, vertex_normals
from .camrig import CameraView, RigSpec, build_rig, project, subsample_rig

__all__ = [
    "TriMesh",
    "load_mesh",
    "normalize_mesh",
    "face_normals",
    "vertex_normals",
    "CameraView",
    "RigSpec",
    "build_rig",
    "project",
    "subsample_rig",
]
