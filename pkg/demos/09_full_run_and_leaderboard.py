"""The whole pipeline in one call, plus a two-model leaderboard.

run_eval drives render -> backends -> metrics -> localization -> report.
With stub backends the run is fully deterministic; swap any stub for a
real sidecar command ({"command": [...]}) to use actual foundation
models without touching the engine.
"""

import json
import tempfile
from pathlib import Path

from eval3d.camrig import RigSpec
from eval3d.localize import write_ply_mesh
from eval3d.pipeline import RunConfig, ScriptedJudge, compare_models, run_eval, stub_backend_specs
from eval3d.primitives import make_icosphere

workdir = Path(tempfile.mkdtemp(prefix="eval3d-demo-"))
mesh_path = workdir / "sphere.ply"
write_ply_mesh(make_icosphere(2), mesh_path)

config = RunConfig(
    mesh=str(mesh_path),
    prompt="a sphere",
    rig=RigSpec(n_views=12, resolution=128),
    backends=stub_backend_specs(),
)

result = run_eval(config, workdir / "run")
print("per-metric scores (all-stub run):")
for key, slot in result.report["metrics"].items():
    status = f"{slot['value']:.1f}" if slot["skipped"] is None else f"skipped: {slot['skipped']}"
    print(f"  {key:7s} {status}")
print(f"\nreport: {workdir / 'run' / 'report.json'}")
print(f"artifacts: {len(result.report['artifacts'])} files "
      "(evidence tensors, heat maps, per-view renders)")

# --- compare two (identical) models with a scripted pairwise judge --------
runs = {
    "model-a": [("p0", config)],
    "model-b": [("p0", config)],
}
board = compare_models(runs, workdir / "cmp", judge=ScriptedJudge(["model-a", "model-b"]))
print("\nleaderboard (judge strictly prefers model-a):")
print(json.dumps(board["models"], indent=2, sort_keys=True))
