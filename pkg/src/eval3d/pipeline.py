"""End-to-end evaluation runs: render -> backends -> metrics -> localization -> report.

A run is driven by a single RunConfig and produces a machine-readable
report.json plus evidence artifacts (TensorFiles, heat-map PLYs, summary
PNGs). With stub backends the whole run is deterministic: rerunning the
same config yields a byte-identical report modulo the timing block.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .assets import load_mesh, normalize_mesh, with_normals
from .backends.protocol import (
    BackendRequest,
    ImageInput,
    QAItem,
    SubprocessBackend,
    TensorInput,
    invoke_backend,
)
from .backends import stubs
from .backends.tensorfile import read_tensor, write_tensor
from .camrig import (
    CameraView,
    RigSpec,
    build_rig,
    camera_position,
    look_at,
    save_rig,
    subsample_rig,
)
from .errors import Eval3DError, MetricError
from .localize import (
    VertexHeat,
    backproject_geo,
    export_heatmap_mesh,
    geo_heat_range,
    sem_heat_range,
    semantic_heat,
    semantic_outliers,
)
from .metrics import (
    AlignConfig,
    GeoConfig,
    SemConfig,
    StructConfig,
    aesthetic_elo,
    aesthetic_mean,
    align_depth_auto,
    depth_to_normal,
    fuse_vertex_features,
    geometric_consistency,
    semantic_consistency,
    structural_consistency,
    text_3d_alignment,
)
from .raster import (
    RenderBuffers,
    normal_to_rgb8,
    rasterize,
    save_normal_png,
    save_opacity_png,
    vertex_visibility,
)

METRIC_KEYS = ("geo", "sem", "struct", "align", "aes")

_REQUIRED_BACKENDS = {
    "geo": ("depth",),
    "sem": ("features",),
    "struct": ("nvs", "perceptual"),
    "align": ("qagen", "vqa"),
    "aes": ("aesthetic",),
}


@dataclass
class RunConfig:
    mesh: str
    prompt: str = ""
    rgb_dir: str | None = None
    rig: RigSpec = field(default_factory=RigSpec)
    metrics: tuple = METRIC_KEYS
    backends: dict = field(default_factory=dict)
    geo: GeoConfig = field(default_factory=GeoConfig)
    sem: SemConfig = field(default_factory=SemConfig)
    struct: StructConfig = field(default_factory=StructConfig)
    align: AlignConfig = field(default_factory=AlignConfig)
    aes_raw_range: tuple = (-2.0, 2.0)
    struct_elevation: float | None = None  # override for dedicated struct views
    seed: int = 0

    @staticmethod
    def from_dict(raw: dict, base_dir: Path | None = None) -> "RunConfig":
        base = Path(base_dir) if base_dir else Path.cwd()

        def respath(p):
            if p is None:
                return None
            p = Path(p)
            return str(p if p.is_absolute() else base / p)

        rig = RigSpec(**raw.get("rig", {}))
        mcfg = raw.get("metrics", {})
        geo = GeoConfig(**mcfg.get("geo", {}))
        sem = SemConfig(**mcfg.get("sem", {}))
        struct_raw = dict(mcfg.get("struct", {}))
        struct_elevation = struct_raw.pop("elevation", None)
        if "input_azimuths" in struct_raw:
            struct_raw["input_azimuths"] = tuple(struct_raw["input_azimuths"])
        struct = StructConfig(**struct_raw)
        align_raw = dict(mcfg.get("align", {}))
        align = AlignConfig(**align_raw)
        aes_raw_range = tuple(mcfg.get("aes", {}).get("raw_range", (-2.0, 2.0)))
        return RunConfig(
            mesh=respath(raw["mesh"]),
            prompt=raw.get("prompt", ""),
            rgb_dir=respath(raw.get("rgb_dir")),
            rig=rig,
            metrics=tuple(raw.get("metrics_enabled", METRIC_KEYS)),
            backends=raw.get("backends", {}),
            geo=geo,
            sem=sem,
            struct=struct,
            align=align,
            aes_raw_range=aes_raw_range,
            struct_elevation=struct_elevation,
            seed=raw.get("seed", 0),
        )

    @staticmethod
    def from_file(path: str | Path) -> "RunConfig":
        path = Path(path)
        return RunConfig.from_dict(json.loads(path.read_text()), base_dir=path.parent)

    def echo(self) -> dict:
        return {
            "mesh": str(self.mesh),
            "prompt": self.prompt,
            "rgb_dir": str(self.rgb_dir) if self.rgb_dir else None,
            "rig": {
                "n_views": self.rig.n_views,
                "elevation": self.rig.elevation,
                "distance": self.rig.distance,
                "vfov": self.rig.vfov,
                "resolution": self.rig.resolution,
            },
            "metrics_enabled": list(self.metrics),
            "geo": {"delta_norm": self.geo.delta_norm, "per_view_mean": self.geo.per_view_mean},
            "sem": {"delta_dino": self.sem.delta_dino, "min_visibility": self.sem.min_visibility},
            "struct": {
                "input_azimuths": list(self.struct.input_azimuths),
                "target_interval": self.struct.target_interval,
                "elevation": self.struct_elevation,
            },
            "align": {"n_views": self.align.n_views, "adjacency_radius": self.align.adjacency_radius},
            "aes": {"raw_range": list(self.aes_raw_range)},
            "seed": self.seed,
        }


def build_backend(kind: str, spec, prompt: str = ""):
    """Resolve a backend entry: an object is used as-is, {"command": [...]}
    becomes a subprocess sidecar, {"stub": {...}} a deterministic stub."""
    if hasattr(spec, "run"):
        return spec
    if not isinstance(spec, dict):
        raise Eval3DError(f"bad backend spec for {kind}: {spec!r}")
    if "command" in spec:
        return SubprocessBackend(kind=kind, command=list(spec["command"]),
                                 timeout_s=spec.get("timeout_s"))
    if "stub" in spec:
        opts = spec["stub"] if isinstance(spec["stub"], dict) else {}
        if kind == "depth":
            return stubs.StubDepth(convention=opts.get("convention", "depth"))
        if kind == "features":
            return stubs.StubFeatures(
                channels=opts.get("channels", 4), value=opts.get("value", 0.5)
            )
        if kind == "nvs":
            return stubs.StubNVS()
        if kind == "perceptual":
            return stubs.StubPerceptual()
        if kind == "qagen":
            return stubs.all_gold_qagen(prompt, opts.get("n_questions", 3))
        if kind == "vqa":
            return stubs.GoldVQA()
        if kind == "aesthetic":
            return stubs.StubAesthetic(value=opts.get("value", 0.0))
    raise Eval3DError(f"backend spec for {kind} needs 'command' or 'stub'")


def stub_backend_specs() -> dict:
    return {k: {"stub": {}} for k in
            ("depth", "features", "nvs", "perceptual", "qagen", "vqa", "aesthetic")}


class _Jobs:
    """Sequential, never-reused job directories under <out>/jobs."""

    def __init__(self, root: Path):
        self.root = root
        self.counter = 0

    def new(self, kind: str) -> Path:
        self.counter += 1
        return self.root / f"job-{kind}-{self.counter:05d}"

    def call(self, backend, request: BackendRequest):
        job_dir = self.new(request.kind)
        response = invoke_backend(backend, request, job_dir)
        return response, job_dir


def _load_rgb_views(rgb_dir: Path, rig: list[CameraView]) -> list[np.ndarray]:
    images = []
    for view in rig:
        candidates = [rgb_dir / f"view_{view.id:03d}.png", rgb_dir / f"view_{view.id}.png"]
        path = next((c for c in candidates if c.exists()), None)
        if path is None:
            raise Eval3DError(f"missing RGB view for id {view.id} in {rgb_dir}")
        img = np.asarray(Image.open(path).convert("RGB"))
        if img.shape[:2] != (view.height, view.width):
            raise Eval3DError(
                f"{path}: size {img.shape[:2]} does not match rig resolution "
                f"{(view.height, view.width)}"
            )
        images.append(img)
    return images


@dataclass
class RunResult:
    report: dict
    out_dir: Path

    @property
    def all_computed(self) -> bool:
        return all(
            slot["skipped"] is None
            for key, slot in self.report["metrics"].items()
            if key in self.report["config"]["metrics_enabled"]
        )


def run_eval(config: RunConfig, out_dir: str | Path) -> RunResult:
    """Execute the full pipeline; always writes report.json (metrics that
    cannot run are reported as skipped with the failing stage's reason)."""
    t_start = time.time()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = _Jobs(out / "jobs")
    timings: dict = {}
    artifacts: list[str] = []
    backend_ids: dict = {}
    slots = {key: {"value": None, "skipped": "not requested", "evidence": {}}
             for key in METRIC_KEYS}

    def record(rel_path: str):
        artifacts.append(rel_path)
        return out / rel_path

    backends = {}
    for kind, spec in config.backends.items():
        backends[kind] = build_backend(kind, spec, config.prompt)
        backend_ids[kind] = getattr(backends[kind], "identity", str(backends[kind]))

    def missing_backends(metric: str):
        return [k for k in _REQUIRED_BACKENDS[metric] if k not in backends]

    # ---- stage: assets + rig + rendering --------------------------------
    t0 = time.time()
    mesh = with_normals(normalize_mesh(load_mesh(config.mesh)))
    rig = build_rig(config.rig)
    (out / "views").mkdir(exist_ok=True)
    buffers = [rasterize(mesh, view) for view in rig]
    save_rig(rig, record("views/rig.json"))
    for view, buf in zip(rig, buffers):
        write_tensor(buf.depth_map, record(f"views/depth_{view.id:03d}.etns"))
        save_normal_png(buf, record(f"views/normal_{view.id:03d}.png"))
        save_opacity_png(buf, record(f"views/opacity_{view.id:03d}.png"))
    timings["render"] = time.time() - t0

    # RGB views are generation-pipeline outputs; without them, stub
    # backends (which never read the pixels) fall back to normal-map
    # renders, while external backends make the RGB-dependent metrics
    # skip.
    have_rgb = config.rgb_dir is not None
    if have_rgb:
        images = _load_rgb_views(Path(config.rgb_dir), rig)
    else:
        images = [normal_to_rgb8(b.normal_map, b.opacity) for b in buffers]

    def images_ok_for(metric: str) -> bool:
        if have_rgb:
            return True
        return all(
            not isinstance(backends[k], SubprocessBackend)
            for k in _REQUIRED_BACKENDS[metric]
        )

    visibility = None

    def get_visibility():
        nonlocal visibility
        if visibility is None:
            t = time.time()
            visibility = vertex_visibility(mesh, rig, buffers)
            timings["visibility"] = time.time() - t
        return visibility

    enabled = [m for m in config.metrics if m in METRIC_KEYS]

    # ---- geometric consistency ------------------------------------------
    if "geo" in enabled:
        t0 = time.time()
        missing = missing_backends("geo")
        if missing:
            slots["geo"]["skipped"] = f"no {missing[0]} backend"
        elif not images_ok_for("geo"):
            slots["geo"]["skipped"] = "no RGB views for external backend"
        else:
            try:
                slots["geo"] = _run_geo(config, rig, buffers, images, backends, jobs, out, record)
            except Eval3DError as exc:
                slots["geo"]["skipped"] = f"geo stage failed: {exc}"
        timings["geo"] = time.time() - t0

    # ---- semantic consistency -------------------------------------------
    if "sem" in enabled:
        t0 = time.time()
        missing = missing_backends("sem")
        if missing:
            slots["sem"]["skipped"] = f"no {missing[0]} backend"
        elif not images_ok_for("sem"):
            slots["sem"]["skipped"] = "no RGB views for external backend"
        else:
            try:
                slots["sem"] = _run_sem(
                    config, mesh, rig, images, backends, jobs, get_visibility(), out, record
                )
            except Eval3DError as exc:
                slots["sem"]["skipped"] = f"sem stage failed: {exc}"
        timings["sem"] = time.time() - t0

    # ---- structural consistency -----------------------------------------
    if "struct" in enabled:
        t0 = time.time()
        missing = missing_backends("struct")
        if missing:
            slots["struct"]["skipped"] = f"no {missing[0]} backend"
        elif not images_ok_for("struct"):
            slots["struct"]["skipped"] = "no RGB views for external backend"
        else:
            try:
                slots["struct"] = _run_struct(config, mesh, rig, images, backends, jobs, out)
            except Eval3DError as exc:
                slots["struct"]["skipped"] = f"struct stage failed: {exc}"
        timings["struct"] = time.time() - t0

    # ---- text-3D alignment ------------------------------------------------
    if "align" in enabled:
        t0 = time.time()
        missing = missing_backends("align")
        if missing:
            slots["align"]["skipped"] = f"no {missing[0]} backend"
        elif not images_ok_for("align"):
            slots["align"]["skipped"] = "no RGB views for external backend"
        elif not config.prompt:
            slots["align"]["skipped"] = "no prompt text"
        else:
            try:
                slots["align"] = _run_align(config, rig, images, backends, jobs)
            except Eval3DError as exc:
                slots["align"]["skipped"] = f"align stage failed: {exc}"
        timings["align"] = time.time() - t0

    # ---- aesthetics --------------------------------------------------------
    if "aes" in enabled:
        t0 = time.time()
        missing = missing_backends("aes")
        if missing:
            slots["aes"]["skipped"] = f"no {missing[0]} backend"
        elif not images_ok_for("aes"):
            slots["aes"]["skipped"] = "no RGB views for external backend"
        else:
            try:
                slots["aes"] = _run_aes(config, rig, images, backends, jobs)
            except Eval3DError as exc:
                slots["aes"]["skipped"] = f"aes stage failed: {exc}"
        timings["aes"] = time.time() - t0

    # ---- localization -------------------------------------------------------
    t0 = time.time()
    (out / "heatmaps").mkdir(exist_ok=True)
    if slots["geo"]["skipped"] is None and "_cosine_maps" in slots["geo"]:
        maps = slots["geo"].pop("_cosine_maps")
        heat = backproject_geo(mesh, rig, maps, get_visibility())
        for aggregate in ("mean", "max"):
            rel = f"heatmaps/geo_{aggregate}.ply"
            export_heatmap_mesh(
                mesh, heat, geo_heat_range(config.geo.delta_norm), record(rel), aggregate
            )
        slots["geo"]["evidence"]["heatmaps"] = ["heatmaps/geo_mean.ply", "heatmaps/geo_max.ply"]
    if slots["sem"]["skipped"] is None:
        vertex_ids = slots["sem"].pop("_vertex_ids")
        variances = slots["sem"].pop("_variances")
        heat = semantic_heat(mesh.n_vertices, vertex_ids, variances)
        outliers = semantic_outliers(heat, config.sem.delta_dino)
        rel = "heatmaps/sem_mean.ply"
        export_heatmap_mesh(
            mesh, heat, sem_heat_range(config.sem.delta_dino), record(rel), "mean"
        )
        slots["sem"]["evidence"]["heatmaps"] = [rel]
        slots["sem"]["evidence"]["n_outlier_vertices"] = int(outliers.sum())
    timings["localize"] = time.time() - t0

    timings["total"] = time.time() - t_start
    report = {
        "engine_version": __version__,
        "config": config.echo(),
        "metrics": slots,
        "backends": backend_ids,
        "artifacts": sorted(artifacts),
        "timings": {k: round(v, 3) for k, v in timings.items()},
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    return RunResult(report=report, out_dir=out)


def _run_geo(config, rig, buffers, images, backends, jobs, out, record):
    analytic, predicted, masks = [], [], []
    (out / "evidence").mkdir(exist_ok=True)
    for view, buf, img in zip(rig, buffers, images):
        depth = buf.depth_map.astype(np.float64)
        ref = np.where(buf.opacity, depth, 0.0)
        req = BackendRequest(
            kind="depth",
            inputs={
                "image": ImageInput(img),
                "ref_depth": TensorInput(ref.astype(np.float32)),
            },
            params={"view_id": view.id, "height": view.height, "width": view.width},
        )
        resp, job_dir = jobs.call(backends["depth"], req)
        pred = read_tensor(job_dir / resp.outputs["depth"]).astype(np.float64)
        convention = resp.meta.get("depth_convention", "depth")
        aligned = align_depth_auto(pred, ref, buf.opacity, convention)
        normals, valid = depth_to_normal(aligned, view, buf.opacity)
        analytic.append(buf.normal_map.astype(np.float64))
        predicted.append(normals)
        masks.append(buf.opacity & valid)
    score = geometric_consistency(analytic, predicted, masks, config.geo)
    angle_paths = []
    for view, ang in zip(rig, score.evidence["angle_maps_deg"]):
        rel = f"evidence/geo_angle_{view.id:03d}.etns"
        write_tensor(np.nan_to_num(ang, nan=-1.0).astype(np.float32), record(rel))
        angle_paths.append(rel)
    return {
        "value": score.value,
        "skipped": None,
        "evidence": {
            "angle_maps": angle_paths,
            "per_view_inlier_ratio": score.evidence["per_view_inlier_ratio"],
            "n_valid_pixels": score.evidence["n_valid_pixels"],
        },
        "_cosine_maps": score.evidence["cosine_distance_maps"],
    }


def _run_sem(config, mesh, rig, images, backends, jobs, visibility, out, record):
    feature_maps = []
    for view, img in zip(rig, images):
        req = BackendRequest(
            kind="features",
            inputs={"image": ImageInput(img)},
            params={"view_id": view.id, "height": view.height, "width": view.width},
        )
        resp, job_dir = jobs.call(backends["features"], req)
        feature_maps.append(read_tensor(job_dir / resp.outputs["features"]).astype(np.float64))
    vertex_ids, samples = fuse_vertex_features(
        mesh, rig, feature_maps, visibility, config.sem.min_visibility
    )
    score = semantic_consistency(vertex_ids, samples, config.sem)
    (out / "evidence").mkdir(exist_ok=True)
    rel = "evidence/sem_vertex_variance.etns"
    write_tensor(score.evidence["vertex_variance"].astype(np.float32), record(rel))
    return {
        "value": score.value,
        "skipped": None,
        "evidence": {
            "vertex_variance": rel,
            "n_vertices_scored": len(vertex_ids),
            "threshold": config.sem.delta_dino,
        },
        "_vertex_ids": vertex_ids,
        "_variances": score.evidence["vertex_variance"],
    }


def _run_struct(config, mesh, rig, images, backends, jobs, out):
    cfg = config.struct
    needed = sorted(set(cfg.input_azimuths) | set(cfg.target_azimuths))
    if config.struct_elevation is not None:
        spec = config.rig
        views = {}
        struct_images = {}
        for k, az in enumerate(needed):
            center = camera_position(az, config.struct_elevation, spec.distance)
            view = CameraView(
                id=1000 + k, azimuth=az, elevation=config.struct_elevation,
                distance=spec.distance, vfov=spec.vfov,
                width=spec.resolution, height=spec.resolution,
                near=spec.near, far=spec.far, world_to_camera=look_at(center),
            )
            buf = rasterize(mesh, view)
            views[az] = view
            struct_images[az] = normal_to_rgb8(buf.normal_map, buf.opacity)
    else:
        by_azimuth = {v.azimuth % 360.0: (v, img) for v, img in zip(rig, images)}
        missing = [a for a in needed if a % 360.0 not in by_azimuth]
        if missing:
            raise MetricError(f"rig has no views at azimuths {missing}")
        views = {a: by_azimuth[a % 360.0][0] for a in needed}
        struct_images = {a: by_azimuth[a % 360.0][1] for a in needed}
    score = structural_consistency(
        views, struct_images, backends["nvs"], backends["perceptual"], cfg,
        jobs.root / "struct",
    )
    return {"value": score.value, "skipped": None, "evidence": score.evidence}


def _run_align(config, rig, images, backends, jobs):
    req = BackendRequest(kind="qagen", params={"prompt": config.prompt})
    resp, _ = jobs.call(backends["qagen"], req)
    qa = [QAItem.from_dict(d) for d in resp.outputs["qa"]]
    subset = subsample_rig(rig, min(config.align.n_views, len(rig)))
    subset_images = [images[rig.index(v)] for v in subset]
    answers = np.empty((len(qa), len(subset)), dtype=object)
    for j, item in enumerate(qa):
        for i, (view, img) in enumerate(zip(subset, subset_images)):
            vreq = BackendRequest(
                kind="vqa",
                inputs={"image": ImageInput(img)},
                params={
                    "view_id": view.id,
                    "question": item.question,
                    "choices": list(item.choices),
                    "gold": item.gold,
                },
            )
            try:
                vresp, _ = jobs.call(backends["vqa"], vreq)
                answers[j, i] = vresp.outputs["answer"]
            except Eval3DError:
                answers[j, i] = None  # missing answer counts as mismatch
    cfg = AlignConfig(n_views=len(subset), adjacency_radius=config.align.adjacency_radius)
    score = text_3d_alignment(qa, answers, cfg)
    return {
        "value": score.value,
        "skipped": None,
        "evidence": {
            "questions": score.evidence["questions"],
            "question_passed": [bool(x) for x in score.evidence["question_passed"]],
            "answers": [[a for a in row] for row in answers],
        },
    }


def _run_aes(config, rig, images, backends, jobs):
    raw = []
    for view, img in zip(rig, images):
        req = BackendRequest(
            kind="aesthetic",
            inputs={"image": ImageInput(img)},
            params={"view_id": view.id},
        )
        resp, _ = jobs.call(backends["aesthetic"], req)
        raw.append(float(resp.outputs["score"]))
    score = aesthetic_mean(raw, config.aes_raw_range)
    return {
        "value": score.value,
        "skipped": None,
        "evidence": {"raw_scores": raw, "raw_range": list(config.aes_raw_range)},
    }


# ---------------------------------------------------------------------------
# Model comparison


class ScriptedJudge:
    """Pairwise judge for tests: prefers models earlier in ``ranking``."""

    kind = "vqa"
    identity = "stub:judge"

    def __init__(self, ranking):
        self.ranking = list(ranking)

    def run(self, job_dir):
        from .backends.protocol import load_request, write_response, BackendResponse

        req = load_request(job_dir)
        a = req.params["model_a"]
        b = req.params["model_b"]
        if a not in self.ranking or b not in self.ranking:
            write_response(job_dir, BackendResponse(
                status="error", message=f"scripted judge: unknown model in ({a}, {b})"))
            return
        winner = "a" if self.ranking.index(a) < self.ranking.index(b) else "b"
        write_response(job_dir, BackendResponse(
            status="ok", outputs={"answer": winner}, meta={"backend": self.identity}))


def compare_models(
    model_runs: dict,
    out_dir: str | Path,
    judge=None,
) -> dict:
    """Aggregate per-model mean scores over a shared prompt set.

    ``model_runs`` maps model id -> list of (prompt_id, RunConfig). All
    models must cover the same prompt ids. When a pairwise ``judge``
    backend is given, the aesthetic column switches from the per-view
    estimator mean to judge-driven ELO (normalized 0-100).
    """
    if len(model_runs) < 2:
        raise Eval3DError("compare needs at least two models")
    out = Path(out_dir)
    prompt_sets = {
        model: tuple(sorted(p for p, _ in runs)) for model, runs in model_runs.items()
    }
    reference = next(iter(prompt_sets.values()))
    for model, prompts in prompt_sets.items():
        if prompts != reference:
            raise Eval3DError(
                f"mismatched prompt sets: {model} covers {prompts}, expected {reference}"
            )

    results: dict = {}
    for model, runs in sorted(model_runs.items()):
        per_metric: dict = {k: [] for k in METRIC_KEYS}
        for prompt_id, cfg in runs:
            res = run_eval(cfg, out / model / prompt_id)
            for key in METRIC_KEYS:
                slot = res.report["metrics"][key]
                if slot["skipped"] is None:
                    per_metric[key].append(slot["value"])
        results[model] = {
            k: (float(np.mean(v)) if v else None) for k, v in per_metric.items()
        }

    if judge is not None:
        jobs = _Jobs(out / "judge-jobs")
        outcomes = []
        models = sorted(model_runs.keys())
        for prompt_id in reference:
            for i in range(len(models)):
                for j in range(i + 1, len(models)):
                    a, b = models[i], models[j]
                    img_a = _first_view_image(out / a / prompt_id)
                    img_b = _first_view_image(out / b / prompt_id)
                    req = BackendRequest(
                        kind="vqa",
                        inputs={"image_a": ImageInput(img_a), "image_b": ImageInput(img_b)},
                        params={
                            "question": "Which render shows the higher-quality 3D asset?",
                            "choices": ["a", "b", "tie"],
                            "model_a": a,
                            "model_b": b,
                            "prompt_id": prompt_id,
                        },
                    )
                    resp, _ = jobs.call(judge, req)
                    answer = resp.outputs["answer"]
                    winner = {"a": a, "b": b, "tie": "tie"}[answer]
                    outcomes.append((a, b, winner))
        elo_scores = aesthetic_elo(outcomes)
        for model in models:
            results[model]["aes"] = elo_scores[model].value if model in elo_scores else None

    leaderboard = {
        "models": results,
        "metric_keys": list(METRIC_KEYS),
        "aesthetic_mode": "elo" if judge is not None else "mean",
    }
    out.mkdir(parents=True, exist_ok=True)
    (out / "leaderboard.json").write_text(json.dumps(leaderboard, indent=2, sort_keys=True))
    return leaderboard


def _first_view_image(run_dir: Path) -> np.ndarray:
    path = run_dir / "views" / "normal_000.png"
    if not path.exists():
        raise Eval3DError(f"no rendered view found under {run_dir}")
    return np.asarray(Image.open(path).convert("RGB"))
