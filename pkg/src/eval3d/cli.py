"""Command-line front end.

    eval3d run --config cfg.json [--out DIR] [--stub-all] [--views N]
               [--metrics geo,sem,struct,align,aes]
    eval3d compare --manifest manifest.json [--out DIR]
    eval3d bench agreement --scores scores.jsonl --annotations ann.jsonl
               [--fixed-thresholds]

Exit codes: 0 all requested metrics computed, 2 partial (some skipped),
1 fatal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bench
from .camrig import RigSpec
from .errors import Eval3DError
from .pipeline import (
    METRIC_KEYS,
    RunConfig,
    ScriptedJudge,
    compare_models,
    run_eval,
    stub_backend_specs,
)
from .backends.protocol import SubprocessBackend


def _cmd_run(args) -> int:
    raw = json.loads(Path(args.config).read_text())
    config = RunConfig.from_dict(raw, base_dir=Path(args.config).parent)
    out = args.out or raw.get("out")
    if not out:
        print("error: no output directory (--out or config 'out')", file=sys.stderr)
        return 1
    if args.stub_all:
        config = dataclasses.replace(config, backends=stub_backend_specs())
    if args.views:
        config = dataclasses.replace(
            config, rig=dataclasses.replace(config.rig, n_views=args.views)
        )
    if args.metrics:
        requested = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
        unknown = [m for m in requested if m not in METRIC_KEYS]
        if unknown:
            print(f"error: unknown metrics {unknown}", file=sys.stderr)
            return 1
        config = dataclasses.replace(config, metrics=requested)
    result = run_eval(config, out)
    for key in METRIC_KEYS:
        slot = result.report["metrics"][key]
        if slot["skipped"] is not None:
            status = f"skipped: {slot['skipped']}"
        else:
            status = f"{slot['value']:.1f}"
        print(f"{key:7s} {status}")
    print(f"report: {result.out_dir / 'report.json'}")
    return 0 if result.all_computed else 2


def _cmd_compare(args) -> int:
    manifest_path = Path(args.manifest)
    raw = json.loads(manifest_path.read_text())
    out = args.out or raw.get("out")
    if not out:
        print("error: no output directory (--out or manifest 'out')", file=sys.stderr)
        return 1
    model_runs = {}
    for model, runs in raw["models"].items():
        entries = []
        for entry in runs:
            cfg_path = manifest_path.parent / entry["config"]
            entries.append((entry["prompt_id"], RunConfig.from_file(cfg_path)))
        model_runs[model] = entries
    judge = None
    judge_raw = raw.get("judge")
    if judge_raw:
        if "ranking" in judge_raw:
            judge = ScriptedJudge(judge_raw["ranking"])
        elif "command" in judge_raw:
            judge = SubprocessBackend(kind="vqa", command=judge_raw["command"])
        else:
            print("error: judge needs 'ranking' or 'command'", file=sys.stderr)
            return 1
    leaderboard = compare_models(model_runs, out, judge=judge)
    header = ["model"] + list(leaderboard["metric_keys"])
    print("  ".join(f"{h:>8s}" for h in header))
    for model, row in sorted(leaderboard["models"].items()):
        cells = [f"{model:>8s}"]
        for key in leaderboard["metric_keys"]:
            value = row[key]
            cells.append(f"{value:8.1f}" if value is not None else f"{'-':>8s}")
        print("  ".join(cells))
    return 0


def _cmd_bench_agreement(args) -> int:
    scores_rows = [json.loads(line) for line in Path(args.scores).read_text().splitlines() if line.strip()]
    annotations = bench.load_annotations(args.annotations)

    by_metric_scores: dict = {}
    for row in scores_rows:
        by_metric_scores.setdefault(row["metric"], {})[
            (str(row["prompt"]), str(row["model"]))
        ] = float(row["value"])

    results = {}
    for metric in sorted(by_metric_scores):
        anns = [a for a in annotations if a.metric == metric]
        if not anns:
            continue
        scores = by_metric_scores[metric]
        if metric in ("geo", "aesthetic"):
            ranks = {(a.prompt_id, a.model_id): a.payload for a in anns}
            results[metric] = {
                "kind": "pairwise",
                "agreement": bench.pairwise_agreement(scores, ranks),
            }
        elif metric == "align":
            ranks = {
                (a.prompt_id, a.model_id): sum(1 for ans in a.payload if ans == "yes")
                for a in anns
            }
            results[metric] = {
                "kind": "pairwise",
                "agreement": bench.pairwise_agreement(scores, ranks),
            }
        else:  # sem / struct: yes-no labels against a threshold
            paired = [
                (scores[(a.prompt_id, a.model_id)], bench.collapse_uncertain(a.payload))
                for a in anns
                if (a.prompt_id, a.model_id) in scores
            ]
            values = [s for s, _ in paired]
            labels = [l for _, l in paired]
            if args.fixed_thresholds:
                thr = (
                    bench.STRUCTURAL_THRESHOLD
                    if metric == "struct"
                    else bench.SEMANTIC_THRESHOLD
                )
                acc = bench.agreement_at_threshold(values, labels, thr)
            else:
                thr, acc = bench.threshold_sweep(values, labels)
            results[metric] = {
                "kind": "threshold",
                "threshold": thr,
                "agreement": acc,
            }
    print(json.dumps(results, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eval3d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="evaluate one asset")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out")
    run_p.add_argument("--stub-all", action="store_true",
                       help="replace every backend with its deterministic stub")
    run_p.add_argument("--views", type=int, help="override rig view count")
    run_p.add_argument("--metrics", help="comma-separated subset of geo,sem,struct,align,aes")
    run_p.set_defaults(func=_cmd_run)

    cmp_p = sub.add_parser("compare", help="run several models and build a leaderboard")
    cmp_p.add_argument("--manifest", required=True)
    cmp_p.add_argument("--out")
    cmp_p.set_defaults(func=_cmd_compare)

    bench_p = sub.add_parser("bench", help="benchmark utilities")
    bench_sub = bench_p.add_subparsers(dest="bench_command", required=True)
    agree_p = bench_sub.add_parser("agreement", help="human-alignment statistics")
    agree_p.add_argument("--scores", required=True)
    agree_p.add_argument("--annotations", required=True)
    agree_p.add_argument("--fixed-thresholds", action="store_true",
                         help="use the published operating points instead of sweeping")
    agree_p.set_defaults(func=_cmd_bench_agreement)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Eval3DError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
