"""Structural consistency and text-3D alignment.

Structural: from an input view, a novel-view-synthesis backend predicts
the renders at 90-degree steps; a perceptual backend scores prediction
vs actuality; the best input's mean similarity is the score. An asset
with a face on every side (the classic multi-face failure) is
unpredictable from any single view and scores low.

Alignment: an LLM turns the prompt into multiple-choice questions; a VQA
backend answers them per view. A question counts only if some view's
whole cyclic neighborhood answers it correctly.
"""

import tempfile
from pathlib import Path

import numpy as np

from eval3d.assets import normalize_mesh, with_normals
from eval3d.backends import QAItem
from eval3d.backends.stubs import StubNVS, StubPerceptual
from eval3d.camrig import RigSpec, build_rig
from eval3d.metrics import AlignConfig, StructConfig, structural_consistency, text_3d_alignment
from eval3d.primitives import make_icosphere
from eval3d.raster import normal_to_rgb8, rasterize

mesh = with_normals(normalize_mesh(make_icosphere(2)))
rig = build_rig(RigSpec(n_views=4, resolution=96))
views = {v.azimuth: v for v in rig}
images = {}
for v in rig:
    buf = rasterize(mesh, v)
    images[v.azimuth] = normal_to_rgb8(buf.normal_map, buf.opacity)

workdir = Path(tempfile.mkdtemp(prefix="eval3d-demo-"))

# perfect NVS (returns ground truth) -> all distances 0 -> 100%
score = structural_consistency(
    views, images, StubNVS(), StubPerceptual(), StructConfig(), workdir / "gt"
)
print(f"ground-truth NVS: structural consistency {score.value:.1f}")

# scripted distances: the 0-degree input predicts well, the 90-degree
# input poorly; the max over inputs keeps the robust one
table = {(0.0, t): 0.2 for t in (0.0, 90.0, 180.0, 270.0)}
table.update({(90.0, t): 0.4 for t in (0.0, 90.0, 180.0, 270.0)})
score = structural_consistency(
    views, images, StubNVS(), StubPerceptual(table=table), StructConfig(), workdir / "scripted"
)
print(f"scripted distances 0.2 / 0.4: score {score.value:.1f} "
      f"(best input azimuth {score.evidence['best_input_azimuth']})")

# ---- text-3D alignment over a 12-view ring --------------------------------
qa = [
    QAItem("Is there a statue?", ("yes", "no"), "yes"),
    QAItem("Is the statue made of stone?", ("yes", "no"), "yes"),
]
answers = np.full((2, 12), "yes", dtype=object)
answers[1, :] = "no"
answers[1, 5] = "yes"  # one isolated correct view is treated as VQA noise
score = text_3d_alignment(qa, answers, AlignConfig(n_views=12, adjacency_radius=1))
print(f"\nalignment with one isolated correct view: {score.value:.1f} "
      "(the lonely view fails its neighborhood check)")

answers[1, 4:7] = "yes"  # a 3-view arc contains a fully-correct window
score = text_3d_alignment(qa, answers, AlignConfig(n_views=12, adjacency_radius=1))
print(f"alignment with a 3-view correct arc:      {score.value:.1f}")
