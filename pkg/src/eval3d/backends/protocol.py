"""File-based sidecar protocol isolating all foundation-model inference.

One job = one directory:

    job-<id>/
      request.json      written by the engine
      inputs/           engine-provided files (tensors, PNGs)
      outputs/          backend-produced files
      response.json     written by the backend

The backend process is launched with the job directory as its single
argument. Input/output values that are job-relative paths start with
"inputs/" or "outputs/"; anything else is a literal value. Field-by-field
schemas live in docs/protocol.md.
"""

from __future__ import annotations

import json
import os
import subprocess
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import BackendError
from .tensorfile import read_tensor, write_tensor

KINDS = ("depth", "features", "nvs", "perceptual", "qagen", "vqa", "aesthetic")

DEFAULT_TIMEOUT_S = 600.0
TIMEOUT_ENV = "EVAL3D_BACKEND_TIMEOUT_S"


def backend_timeout_s() -> float:
    raw = os.environ.get(TIMEOUT_ENV)
    return float(raw) if raw else DEFAULT_TIMEOUT_S


# Engine-side input wrappers; prepare_job materializes them under inputs/.
@dataclass(frozen=True)
class TensorInput:
    array: np.ndarray


@dataclass(frozen=True)
class ImageInput:
    array: np.ndarray  # (H, W, 3) uint8


@dataclass(frozen=True)
class FileInput:
    path: Path


@dataclass(frozen=True)
class TextInput:
    text: str


@dataclass
class BackendRequest:
    kind: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BackendError(f"unknown backend kind: {self.kind}")


@dataclass
class BackendResponse:
    status: str
    message: str = ""
    outputs: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class QAItem:
    """Multiple-choice question with its expected answer."""

    question: str
    choices: tuple
    gold: str

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if len(self.choices) < 2:
            raise BackendError(f"question needs >= 2 choices: {self.question!r}")
        if self.gold not in self.choices:
            raise BackendError(
                f"gold answer {self.gold!r} not among choices {self.choices}"
            )

    def to_dict(self) -> dict:
        return {"question": self.question, "choices": list(self.choices), "gold": self.gold}

    @staticmethod
    def from_dict(d: dict) -> "QAItem":
        return QAItem(question=d["question"], choices=tuple(d["choices"]), gold=d["gold"])


def load_request(job_dir: str | Path) -> BackendRequest:
    data = json.loads((Path(job_dir) / "request.json").read_text())
    return BackendRequest(kind=data["kind"], inputs=data.get("inputs", {}), params=data.get("params", {}))


def write_response(job_dir: str | Path, response: BackendResponse) -> None:
    payload = {
        "status": response.status,
        "message": response.message,
        "outputs": response.outputs,
        "meta": response.meta,
    }
    (Path(job_dir) / "response.json").write_text(json.dumps(payload, indent=2, sort_keys=True))


def load_response(job_dir: str | Path) -> BackendResponse:
    path = Path(job_dir) / "response.json"
    if not path.exists():
        raise BackendError(f"backend wrote no response.json in {job_dir}")
    data = json.loads(path.read_text())
    return BackendResponse(
        status=data.get("status", "error"),
        message=data.get("message", ""),
        outputs=data.get("outputs", {}),
        meta=data.get("meta", {}),
    )


def prepare_job(job_dir: Path, request: BackendRequest) -> None:
    """Materialize the job directory. Refuses to reuse an existing one."""
    job_dir = Path(job_dir)
    if job_dir.exists():
        raise BackendError(f"job directory already exists: {job_dir}")
    (job_dir / "inputs").mkdir(parents=True)
    (job_dir / "outputs").mkdir()
    serializable_inputs = {}
    for name, value in request.inputs.items():
        if isinstance(value, TensorInput):
            rel = f"inputs/{name}.etns"
            write_tensor(value.array, job_dir / rel)
            serializable_inputs[name] = rel
        elif isinstance(value, ImageInput):
            rel = f"inputs/{name}.png"
            Image.fromarray(value.array).save(job_dir / rel)
            serializable_inputs[name] = rel
        elif isinstance(value, FileInput):
            rel = f"inputs/{name}{Path(value.path).suffix}"
            (job_dir / rel).write_bytes(Path(value.path).read_bytes())
            serializable_inputs[name] = rel
        elif isinstance(value, TextInput):
            serializable_inputs[name] = value.text
        elif isinstance(value, str):
            serializable_inputs[name] = value
        else:
            raise BackendError(f"unsupported input value for {name!r}: {type(value)}")
    payload = {"kind": request.kind, "inputs": serializable_inputs, "params": request.params}
    (job_dir / "request.json").write_text(json.dumps(payload, indent=2, sort_keys=True))


def _require_output(response: BackendResponse, name: str):
    if name not in response.outputs:
        raise BackendError(f"response missing output {name!r}")
    return response.outputs[name]


def validate_response(
    request: BackendRequest, response: BackendResponse, job_dir: Path
) -> BackendResponse:
    """Check a successful response against its kind's shape contract."""
    kind = request.kind
    job_dir = Path(job_dir)
    if kind == "depth":
        rel = _require_output(response, "depth")
        arr = read_tensor(job_dir / rel)
        h = request.params.get("height")
        w = request.params.get("width")
        if arr.ndim != 2 or (h and w and arr.shape != (h, w)):
            raise BackendError(
                f"shape contract violated: expected depth {h}x{w}, got {arr.shape}"
            )
        conv = response.meta.get("depth_convention", "depth")
        if conv not in ("depth", "disparity"):
            raise BackendError(f"unknown depth_convention {conv!r}")
    elif kind == "features":
        rel = _require_output(response, "features")
        arr = read_tensor(job_dir / rel)
        if arr.ndim != 3 or arr.shape[1:] != (256, 256):
            raise BackendError(
                f"shape contract violated: expected CxHxW = Cx256x256, got {arr.shape}"
            )
        channels = response.meta.get("channels")
        if channels is not None and channels != arr.shape[0]:
            raise BackendError(
                f"declared channels {channels} != tensor channels {arr.shape[0]}"
            )
    elif kind == "nvs":
        rel = _require_output(response, "image")
        img = np.asarray(Image.open(job_dir / rel).convert("RGB"))
        h = request.params.get("height")
        w = request.params.get("width")
        if h and w and img.shape != (h, w, 3):
            raise BackendError(
                f"shape contract violated: expected image {h}x{w}x3, got {img.shape}"
            )
    elif kind == "perceptual":
        value = _require_output(response, "distance")
        if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
            raise BackendError(f"perceptual distance must be in [0, 1], got {value!r}")
    elif kind == "qagen":
        items = _require_output(response, "qa")
        if not isinstance(items, list) or not items:
            raise BackendError("qagen must return a non-empty list of QA items")
        for d in items:
            QAItem.from_dict(d)
    elif kind == "vqa":
        answer = _require_output(response, "answer")
        choices = request.params.get("choices", [])
        if choices and answer not in choices:
            raise BackendError(
                f"vqa answer {answer!r} not among choices {choices}"
            )
    elif kind == "aesthetic":
        value = _require_output(response, "score")
        if not isinstance(value, (int, float)):
            raise BackendError(f"aesthetic score must be a number, got {value!r}")
    return response


@dataclass
class SubprocessBackend:
    """External sidecar launched as: command... <job_dir>."""

    kind: str
    command: list
    timeout_s: float | None = None

    @property
    def identity(self) -> str:
        return " ".join(str(c) for c in self.command)

    def run(self, job_dir: Path) -> None:
        timeout = self.timeout_s if self.timeout_s is not None else backend_timeout_s()
        try:
            proc = subprocess.run(
                [str(c) for c in self.command] + [str(job_dir)],
                capture_output=True,
                text=True,
                timeout=timeout,
            )
        except subprocess.TimeoutExpired as exc:
            tail = (exc.stderr or "")[-2000:] if isinstance(exc.stderr, str) else ""
            raise BackendError(
                f"backend {self.identity!r} timed out after {timeout}s", tail
            ) from exc
        if proc.returncode != 0 and not (Path(job_dir) / "response.json").exists():
            raise BackendError(
                f"backend {self.identity!r} exited {proc.returncode}",
                proc.stderr[-2000:],
            )


def invoke_backend(backend, request: BackendRequest, job_dir: str | Path | None = None) -> BackendResponse:
    """Run one job through a backend and validate the response.

    ``backend`` is anything with .kind and .run(job_dir): a
    SubprocessBackend or an in-process stub. A fresh job directory is
    created (never reused); pass ``job_dir`` to control its location.
    """
    if backend.kind != request.kind:
        raise BackendError(
            f"request kind {request.kind!r} routed to {backend.kind!r} backend"
        )
    if job_dir is None:
        job_dir = Path.cwd() / f"job-{uuid.uuid4().hex}"
    job_dir = Path(job_dir)
    prepare_job(job_dir, request)
    backend.run(job_dir)
    response = load_response(job_dir)
    if not response.ok:
        raise BackendError(f"backend error ({request.kind}): {response.message}")
    return validate_response(request, response, job_dir)
