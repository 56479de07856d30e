"""Structural consistency: cross-view predictability via an NVS probe.

From each configured input view, a novel-view-synthesis backend predicts
the renders at every target azimuth; a perceptual backend scores each
prediction against the actual render. The best input's mean similarity is
the score: a structurally incoherent asset (e.g. one face on every side)
is unpredictable from any single view.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from ..backends.protocol import BackendRequest, ImageInput, invoke_backend
from ..camrig import CameraView
from ..errors import MetricError
from .common import MetricScore

DEFAULT_INPUT_AZIMUTHS = (0.0, 90.0)
DEFAULT_TARGET_INTERVAL = 90.0


@dataclass
class StructConfig:
    input_azimuths: tuple = DEFAULT_INPUT_AZIMUTHS
    target_interval: float = DEFAULT_TARGET_INTERVAL

    def __post_init__(self):
        if not self.input_azimuths:
            raise MetricError("need at least one input azimuth")
        if self.target_interval <= 0 or 360.0 % self.target_interval != 0:
            raise MetricError(
                f"target interval must divide 360: {self.target_interval}"
            )

    @property
    def target_azimuths(self) -> tuple:
        return tuple(np.arange(0.0, 360.0, self.target_interval))


def _pose(view: CameraView) -> dict:
    return {
        "azimuth": view.azimuth,
        "elevation": view.elevation,
        "distance": view.distance,
        "vfov": view.vfov,
    }


def structural_consistency(
    views: dict,
    images: dict,
    nvs_backend,
    perceptual_backend,
    cfg: StructConfig,
    job_root: Path,
) -> MetricScore:
    """``views``/``images`` map azimuth -> CameraView / (H, W, 3) uint8
    render, and must cover every input and target azimuth."""
    needed = set(cfg.input_azimuths) | set(cfg.target_azimuths)
    missing = sorted(a for a in needed if a not in images or a not in views)
    if missing:
        raise MetricError(f"missing renders at azimuths {missing}")
    job_root = Path(job_root)
    per_input = {}
    distances = {}
    counter = 0
    for a in cfg.input_azimuths:
        dists = []
        for t in cfg.target_azimuths:
            src_view = views[a]
            tgt_view = views[t]
            nvs_req = BackendRequest(
                kind="nvs",
                inputs={
                    "source_image": ImageInput(images[a]),
                    "ref_target_image": ImageInput(images[t]),
                },
                params={
                    "source_pose": _pose(src_view),
                    "target_pose": _pose(tgt_view),
                    "source_azimuth": a,
                    "target_azimuth": t,
                    "width": tgt_view.width,
                    "height": tgt_view.height,
                },
            )
            nvs_dir = job_root / f"job-nvs-{counter:04d}"
            nvs_resp = invoke_backend(nvs_backend, nvs_req, nvs_dir)
            predicted = np.asarray(
                Image.open(nvs_dir / nvs_resp.outputs["image"]).convert("RGB")
            )
            perc_req = BackendRequest(
                kind="perceptual",
                inputs={
                    "image_a": ImageInput(predicted),
                    "image_b": ImageInput(images[t]),
                },
                params={"source_azimuth": a, "target_azimuth": t},
            )
            perc_resp = invoke_backend(
                perceptual_backend, perc_req, job_root / f"job-perceptual-{counter:04d}"
            )
            d = float(perc_resp.outputs["distance"])
            dists.append(d)
            distances[(a, t)] = d
            counter += 1
        per_input[a] = float(np.mean([1.0 - d for d in dists]))
    best = max(cfg.input_azimuths, key=lambda a: per_input[a])
    return MetricScore(
        name="structural_consistency",
        value=100.0 * per_input[best],
        evidence={
            "per_input_similarity": per_input,
            "pair_distances": {f"{a}->{t}": d for (a, t), d in distances.items()},
            "best_input_azimuth": best,
        },
    )


def structural_score_from_distances(distance_table: dict, cfg: StructConfig) -> float:
    """Pure arithmetic form: {(input_az, target_az): distance} -> score."""
    per_input = []
    for a in cfg.input_azimuths:
        ds = [distance_table[(a, t)] for t in cfg.target_azimuths]
        per_input.append(np.mean([1.0 - d for d in ds]))
    return 100.0 * float(max(per_input))
