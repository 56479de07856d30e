"""Run a stub backend as a real subprocess sidecar.

Usage: python3 -m eval3d.backends.stub_cli <kind> [--config FILE] <job_dir>

The optional JSON config mirrors the stub constructors; table keys are
encoded as lists of [key..., value] rows because JSON has no tuple keys.
Exists so the subprocess transport itself can be exercised end-to-end.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import stubs


def _build(kind: str, cfg: dict):
    if kind == "depth":
        return stubs.StubDepth(convention=cfg.get("convention", "depth"))
    if kind == "features":
        per_view = None
        if "per_view" in cfg:
            per_view = {int(k): v for k, v in cfg["per_view"].items()}
        return stubs.StubFeatures(
            channels=cfg.get("channels", 4),
            value=cfg.get("value", 0.0),
            per_view=per_view,
            resolution=cfg.get("resolution", stubs.FEATURE_RESOLUTION),
        )
    if kind == "nvs":
        return stubs.StubNVS()
    if kind == "perceptual":
        table = None
        if "table" in cfg:
            table = {(row[0], row[1]): row[2] for row in cfg["table"]}
        return stubs.StubPerceptual(table=table)
    if kind == "qagen":
        return stubs.StubQAGen(table=cfg.get("table", {}))
    if kind == "vqa":
        if cfg.get("gold"):
            return stubs.GoldVQA()
        table = {(row[0], row[1]): row[2] for row in cfg.get("table", [])}
        return stubs.StubVQA(table=table, default=cfg.get("default"))
    if kind == "aesthetic":
        return stubs.StubAesthetic(value=cfg.get("value", 0.0))
    raise SystemExit(f"unknown stub kind: {kind}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="eval3d-stub")
    parser.add_argument("kind")
    parser.add_argument("--config", type=Path)
    parser.add_argument("job_dir", type=Path)
    args = parser.parse_args(argv)
    cfg = json.loads(args.config.read_text()) if args.config else {}
    stub = _build(args.kind, cfg)
    stub.run(args.job_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
