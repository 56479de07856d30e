"""Aesthetic scoring: per-view estimator average, or pairwise-judge ELO."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MetricError
from .common import MetricScore

# Raw estimator outputs are roughly standardized; the affine map to
# percent is deliberately wide and uncalibrated (config-overridable).
DEFAULT_RAW_RANGE = (-2.0, 2.0)

ELO_SCALE = 400.0
TIE = "tie"


def aesthetic_mean(raw_scores, raw_range=DEFAULT_RAW_RANGE) -> MetricScore:
    """Average the per-view raw scores, then map [lo, hi] -> [0, 100] with clamping."""
    scores = np.asarray(list(raw_scores), dtype=np.float64)
    if scores.size == 0:
        raise MetricError("no aesthetic scores")
    lo, hi = raw_range
    if hi <= lo:
        raise MetricError(f"bad raw range: {raw_range}")
    value = 100.0 * float(np.clip((scores.mean() - lo) / (hi - lo), 0.0, 1.0))
    return MetricScore(
        name="aesthetic",
        value=value,
        evidence={"raw_scores": scores, "raw_range": list(raw_range)},
    )


def _components(models, pairs):
    adjacency = {m: set() for m in models}
    for a, b in pairs:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = set()
    comps = []
    for m in models:
        if m in seen:
            continue
        stack = [m]
        comp = []
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            comp.append(cur)
            stack.extend(adjacency[cur] - seen)
        comps.append(sorted(comp))
    return comps


def bradley_terry_elo(outcomes, max_iter: int = 10000, tol: float = 1e-12) -> dict:
    """Maximum-likelihood pairwise strengths on the ELO scale.

    ``outcomes`` is an iterable of (model_a, model_b, winner) where winner
    is one of the two names or "tie" (counted half a win each). Estimation
    runs on aggregated counts (minorize-maximize updates), so the result
    is independent of outcome order. Returns model -> ELO, centered so
    the ratings sum to zero.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise MetricError("no pairwise outcomes")
    models = sorted({m for a, b, _ in outcomes for m in (a, b)})
    index = {m: i for i, m in enumerate(models)}
    n = len(models)
    wins = np.zeros((n, n))
    for a, b, winner in outcomes:
        if a == b:
            raise MetricError(f"self-comparison for {a!r}")
        i, j = index[a], index[b]
        if winner == TIE:
            wins[i, j] += 0.5
            wins[j, i] += 0.5
        elif winner == a:
            wins[i, j] += 1.0
        elif winner == b:
            wins[j, i] += 1.0
        else:
            raise MetricError(f"winner {winner!r} is neither {a!r} nor {b!r}")

    games = wins + wins.T
    comps = _components(models, [(a, b) for a, b, _ in outcomes])
    if len(comps) > 1:
        raise MetricError(
            "comparison graph is disconnected: "
            + " | ".join(",".join(c) for c in comps)
        )

    p = np.ones(n)
    total_wins = wins.sum(axis=1)
    floor = 1e-30
    for _ in range(max_iter):
        denom = np.zeros(n)
        for i in range(n):
            active = games[i] > 0
            denom[i] = (games[i, active] / (p[i] + p[active])).sum()
        p_new = np.where(denom > 0, total_wins / np.maximum(denom, floor), floor)
        p_new = np.maximum(p_new, floor)
        p_new /= np.exp(np.mean(np.log(p_new)))  # geometric mean 1
        if np.abs(np.log(p_new) - np.log(p)).max() < tol:
            p = p_new
            break
        p = p_new
    elo = ELO_SCALE * np.log10(p)
    return {m: float(elo[index[m]]) for m in models}


def aesthetic_elo(outcomes) -> dict:
    """Per-model aesthetic scores from pairwise judgments: Bradley-Terry
    ELO min-max normalized to [0, 100] across the compared set. A constant
    rating vector (fully symmetric outcomes) maps to 50 for everyone."""
    elo = bradley_terry_elo(outcomes)
    values = np.array(list(elo.values()))
    lo, hi = values.min(), values.max()
    scores = {}
    for model, rating in elo.items():
        if hi - lo < 1e-9:
            norm = 50.0
        else:
            norm = 100.0 * (rating - lo) / (hi - lo)
        scores[model] = MetricScore(
            name="aesthetic_elo",
            value=float(norm),
            evidence={"elo": rating, "elo_by_model": elo},
        )
    return scores
