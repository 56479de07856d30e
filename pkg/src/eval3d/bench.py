"""Benchmark ingestion and human-alignment statistics.

Prompt sets and annotations arrive as JSON-lines. Agreement between an
automatic metric and human raters is computed two ways, matching how the
annotations were collected: pairwise comparison agreement for ranked
metrics, and best-threshold binary accuracy for yes/no metrics.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BenchError

ELEMENT_KINDS = (
    "entity-whole",
    "entity-part",
    "attribute",
    "relation",
    "action",
    "other",
)
CATEGORIES = ("single-object", "multi-object")

# Published operating points for thresholding continuous scores into the
# yes/no classes used by human raters.
STRUCTURAL_THRESHOLD = 75.8
SEMANTIC_THRESHOLD = 63.3

YES_NO_VALUES = ("yes", "uncertain-yes", "uncertain-no", "no")


@dataclass(frozen=True)
class SceneElement:
    kind: str
    text: str

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise BenchError(f"unknown element kind: {self.kind!r}")


@dataclass(frozen=True)
class PromptRecord:
    id: str
    text: str
    category: str
    scene_graph: tuple = ()
    image_path: str | None = None

    def __post_init__(self):
        if not self.text:
            raise BenchError(f"prompt {self.id!r}: empty text")
        if self.category not in CATEGORIES:
            raise BenchError(f"prompt {self.id!r}: unknown category {self.category!r}")
        object.__setattr__(self, "scene_graph", tuple(self.scene_graph))


@dataclass(frozen=True)
class AnnotationRecord:
    prompt_id: str
    model_id: str
    metric: str
    payload: object  # rank int 0-9 | yes/no label | list of per-question answers

    def __post_init__(self):
        if self.metric in ("geo", "aesthetic"):
            if not isinstance(self.payload, int) or not 0 <= self.payload <= 9:
                raise BenchError(
                    f"{self.metric} annotation must be a 0-9 rank, got {self.payload!r}"
                )
        elif self.metric in ("sem", "struct"):
            if self.payload not in YES_NO_VALUES:
                raise BenchError(
                    f"{self.metric} annotation must be one of {YES_NO_VALUES}"
                )
        elif self.metric == "align":
            if not isinstance(self.payload, list):
                raise BenchError("align annotation must be a list of answers")
        else:
            raise BenchError(f"unknown metric name: {self.metric!r}")


def load_promptset(path: str | Path) -> list[PromptRecord]:
    """Parse a JSON-lines prompt set; schema violations report the line."""
    records = []
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                elements = tuple(
                    SceneElement(kind=e["kind"], text=e["text"])
                    for e in raw.get("scene_graph", [])
                )
                records.append(
                    PromptRecord(
                        id=str(raw["id"]),
                        text=raw["text"],
                        category=raw["category"],
                        scene_graph=elements,
                        image_path=raw.get("image_path"),
                    )
                )
            except (KeyError, TypeError, json.JSONDecodeError, BenchError) as exc:
                raise BenchError(f"{path}:{lineno}: {exc}") from exc
    if not records:
        warnings.warn(f"prompt set {path} is empty", stacklevel=2)
    return records


def category_counts(records: list[PromptRecord]) -> dict:
    counts = {c: 0 for c in CATEGORIES}
    for r in records:
        counts[r.category] += 1
    return counts


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    records = []
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                records.append(
                    AnnotationRecord(
                        prompt_id=str(raw["prompt"]),
                        model_id=str(raw["model"]),
                        metric=raw["metric"],
                        payload=raw["payload"],
                    )
                )
            except (KeyError, TypeError, json.JSONDecodeError, BenchError) as exc:
                raise BenchError(f"{path}:{lineno}: {exc}") from exc
    return records


def pairwise_agreement(metric_scores: dict, human_ranks: dict) -> float:
    """Probability (in percent) that the metric orders a model pair the
    same way as the human ranks.

    Both arguments map (prompt_id, model_id) -> scalar. Within each
    prompt, every unordered model pair with differing human ranks is a
    trial; human ties are excluded. A metric tie on a decided pair counts
    against agreement.
    """
    prompts = {}
    for (prompt, model) in human_ranks:
        prompts.setdefault(prompt, []).append(model)
    agree = 0
    total = 0
    for prompt, models in prompts.items():
        models = sorted(models)
        for i in range(len(models)):
            for j in range(i + 1, len(models)):
                a, b = models[i], models[j]
                if (prompt, a) not in metric_scores or (prompt, b) not in metric_scores:
                    continue
                h = human_ranks[(prompt, a)] - human_ranks[(prompt, b)]
                if h == 0:
                    continue
                m = metric_scores[(prompt, a)] - metric_scores[(prompt, b)]
                total += 1
                if np.sign(m) == np.sign(h):
                    agree += 1
    if total == 0:
        raise BenchError("no comparable pairs (all human ranks tied or missing)")
    return 100.0 * agree / total


def collapse_uncertain(label: str, drop_uncertain: bool = False):
    """Map 4-way labels to booleans; None when dropped."""
    if label in ("yes", "uncertain-yes"):
        return None if (drop_uncertain and label == "uncertain-yes") else True
    if label in ("no", "uncertain-no"):
        return None if (drop_uncertain and label == "uncertain-no") else False
    raise BenchError(f"unknown yes/no label: {label!r}")


def agreement_at_threshold(scores, labels, threshold: float) -> float:
    """Accuracy (percent) of classifying score > threshold as the positive class."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape or scores.size == 0:
        raise BenchError("scores and labels must align and be non-empty")
    predicted = scores > threshold
    return 100.0 * float((predicted == labels).mean())


def threshold_sweep(scores, labels) -> tuple:
    """Best (threshold, accuracy percent) over all midpoints between
    consecutive distinct sorted scores. Ties pick the lowest threshold.

    Accuracy depends only on score order, so any strictly monotone
    transform of the scores yields the same best accuracy.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if labels.all() or not labels.any():
        raise BenchError("threshold sweep needs both label classes")
    uniq = np.unique(scores)
    if len(uniq) < 2:
        raise BenchError("all scores identical; no threshold separates them")
    candidates = (uniq[:-1] + uniq[1:]) / 2.0
    best_thr = None
    best_acc = -1.0
    for thr in candidates:
        acc = agreement_at_threshold(scores, labels, thr)
        if acc > best_acc:
            best_acc = acc
            best_thr = thr
    return float(best_thr), float(best_acc)
