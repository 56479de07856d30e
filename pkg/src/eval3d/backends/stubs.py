"""Deterministic stub backends.

Every stub honors the exact response contract of its kind, so the whole
pipeline can run hermetically in tests and in `--stub-all` mode. Scripted
stubs raise (via an error response) on lookup misses: a test that feeds
them must be fully specified.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .protocol import (
    BackendResponse,
    QAItem,
    load_request,
    write_response,
)
from .tensorfile import read_tensor, write_tensor

FEATURE_RESOLUTION = 256


def _read_image(job_dir: Path, rel: str) -> np.ndarray:
    return np.asarray(Image.open(Path(job_dir) / rel).convert("RGB"))


def _ok(job_dir: Path, outputs: dict, meta: dict) -> None:
    write_response(job_dir, BackendResponse(status="ok", outputs=outputs, meta=meta))


def _fail(job_dir: Path, message: str, meta: dict) -> None:
    write_response(job_dir, BackendResponse(status="error", message=message, meta=meta))


@dataclass
class StubDepth:
    """Echoes the engine's reference depth bit-exactly."""

    kind: str = "depth"
    convention: str = "depth"

    @property
    def identity(self) -> str:
        return "stub:depth"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        src = Path(job_dir) / req.inputs["ref_depth"]
        dst = Path(job_dir) / "outputs" / "depth.etns"
        if self.convention == "depth":
            shutil.copyfile(src, dst)
        else:
            depth = read_tensor(src)
            disp = np.zeros_like(depth)
            valid = np.isfinite(depth) & (depth > 0)
            disp[valid] = 1.0 / depth[valid]
            write_tensor(disp, dst)
        _ok(
            job_dir,
            {"depth": "outputs/depth.etns"},
            {"backend": self.identity, "depth_convention": self.convention},
        )


@dataclass
class StubFeatures:
    """Constant or per-view scripted feature maps.

    ``per_view`` maps view id -> list of per-channel constants; when unset
    every view gets ``channels`` channels filled with ``value``.
    ``resolution`` exists so tests can provoke contract violations.
    """

    channels: int = 4
    value: float = 0.0
    per_view: dict | None = None
    resolution: int = FEATURE_RESOLUTION
    kind: str = "features"

    @property
    def identity(self) -> str:
        return "stub:features"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        meta = {"backend": self.identity}
        if self.per_view is not None:
            view_id = req.params.get("view_id")
            if view_id not in self.per_view:
                _fail(job_dir, f"scripted features: no entry for view {view_id}", meta)
                return
            channel_values = np.asarray(self.per_view[view_id], dtype=np.float32)
        else:
            channel_values = np.full(self.channels, self.value, dtype=np.float32)
        fmap = np.broadcast_to(
            channel_values[:, None, None],
            (len(channel_values), self.resolution, self.resolution),
        ).astype(np.float32)
        write_tensor(fmap, Path(job_dir) / "outputs" / "features.etns")
        meta["channels"] = len(channel_values)
        _ok(job_dir, {"features": "outputs/features.etns"}, meta)


@dataclass
class StubNVS:
    """Returns the engine's own render at the target pose (perfect NVS)."""

    kind: str = "nvs"

    @property
    def identity(self) -> str:
        return "stub:nvs"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        meta = {"backend": self.identity}
        rel = req.inputs.get("ref_target_image")
        if rel is None:
            _fail(job_dir, "stub nvs needs the ref_target_image input", meta)
            return
        shutil.copyfile(Path(job_dir) / rel, Path(job_dir) / "outputs" / "image.png")
        _ok(job_dir, {"image": "outputs/image.png"}, meta)


def _ncc_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - normalized cross-correlation of grayscale images, clamped to [0, 1]."""
    ga = a.astype(np.float64).mean(axis=2).ravel()
    gb = b.astype(np.float64).mean(axis=2).ravel()
    if np.array_equal(ga, gb):
        return 0.0
    da = ga - ga.mean()
    db = gb - gb.mean()
    na = np.linalg.norm(da)
    nb = np.linalg.norm(db)
    if na == 0.0 or nb == 0.0:
        return 0.0 if np.array_equal(ga, gb) else 1.0
    ncc = float(np.dot(da, db) / (na * nb))
    return float(np.clip(1.0 - ncc, 0.0, 1.0))


@dataclass
class StubPerceptual:
    """NCC-based image distance, or a scripted (source, target) table."""

    table: dict | None = None  # (source_azimuth, target_azimuth) -> distance
    kind: str = "perceptual"

    @property
    def identity(self) -> str:
        return "stub:perceptual"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        meta = {"backend": self.identity}
        if self.table is not None:
            key = (req.params.get("source_azimuth"), req.params.get("target_azimuth"))
            if key not in self.table:
                _fail(job_dir, f"scripted perceptual: no entry for {key}", meta)
                return
            _ok(job_dir, {"distance": float(self.table[key])}, meta)
            return
        a = _read_image(job_dir, req.inputs["image_a"])
        b = _read_image(job_dir, req.inputs["image_b"])
        if a.shape != b.shape:
            _fail(job_dir, f"image shapes differ: {a.shape} vs {b.shape}", meta)
            return
        _ok(job_dir, {"distance": _ncc_distance(a, b)}, meta)


@dataclass
class StubQAGen:
    """Scripted question generation: prompt text -> QA items."""

    table: dict = field(default_factory=dict)  # prompt -> list[QAItem]
    kind: str = "qagen"

    @property
    def identity(self) -> str:
        return "stub:qagen"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        meta = {"backend": self.identity}
        prompt = req.params.get("prompt", "")
        if prompt not in self.table:
            _fail(job_dir, f"scripted qagen: no entry for prompt {prompt!r}", meta)
            return
        items = [q.to_dict() if isinstance(q, QAItem) else q for q in self.table[prompt]]
        _ok(job_dir, {"qa": items}, meta)


def all_gold_qagen(prompt: str, n_questions: int = 3) -> StubQAGen:
    """Convenience fixture: template yes/no questions answered 'yes'."""
    items = [
        QAItem(question=f"Does the asset match requirement {k}?", choices=("yes", "no"), gold="yes")
        for k in range(n_questions)
    ]
    return StubQAGen(table={prompt: items})


@dataclass
class StubVQA:
    """Scripted VQA: (view id, question) -> chosen answer.

    ``default`` answers any missing key when set; otherwise misses error.
    """

    table: dict = field(default_factory=dict)
    default: str | None = None
    kind: str = "vqa"

    @property
    def identity(self) -> str:
        return "stub:vqa"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        meta = {"backend": self.identity}
        key = (req.params.get("view_id"), req.params.get("question"))
        if key in self.table:
            answer = self.table[key]
        elif self.default is not None:
            answer = self.default
        else:
            _fail(job_dir, f"scripted vqa: no entry for {key}", meta)
            return
        _ok(job_dir, {"answer": answer}, meta)


class GoldVQA:
    """Answers every question with its gold answer (params carry it)."""

    kind = "vqa"
    identity = "stub:vqa-gold"

    def run(self, job_dir: Path) -> None:
        req = load_request(job_dir)
        _ok(job_dir, {"answer": req.params["gold"]}, {"backend": self.identity})


@dataclass
class StubAesthetic:
    value: float = 0.0
    kind: str = "aesthetic"

    @property
    def identity(self) -> str:
        return "stub:aesthetic"

    def run(self, job_dir: Path) -> None:
        load_request(job_dir)
        _ok(job_dir, {"score": float(self.value)}, {"backend": self.identity})


def default_stub_suite(prompt: str = "") -> dict:
    """The all-stub backend set used by --stub-all runs.

    Depth echoes the render, NVS returns ground truth, perceptual uses
    NCC, features are constant, VQA answers gold, aesthetics are fixed at
    the midpoint of the calibration range.
    """
    return {
        "depth": StubDepth(),
        "features": StubFeatures(channels=4, value=0.5),
        "nvs": StubNVS(),
        "perceptual": StubPerceptual(),
        "qagen": all_gold_qagen(prompt),
        "vqa": GoldVQA(),
        "aesthetic": StubAesthetic(value=0.0),
    }
