"""Text-3D alignment from per-view VQA answers.

A question passes when some viewpoint exists whose whole cyclic
neighborhood answers it correctly; requiring a run of consistent views
(rather than any single view) absorbs both occlusion and VQA noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..backends.protocol import QAItem
from ..errors import MetricError
from .common import MetricScore


@dataclass
class AlignConfig:
    n_views: int = 12
    adjacency_radius: int = 1  # cyclic, self-inclusive window half-width

    def __post_init__(self):
        if self.n_views < 3:
            raise MetricError(f"alignment needs >= 3 views, got {self.n_views}")
        if self.adjacency_radius < 0:
            raise MetricError("adjacency radius must be >= 0")


def question_passes(correct: np.ndarray, radius: int) -> bool:
    """Any view whose window [i-radius, i+radius] (cyclic) is all-correct."""
    n = len(correct)
    for i in range(n):
        if all(correct[(i + k) % n] for k in range(-radius, radius + 1)):
            return True
    return False


def text_3d_alignment(
    qa: list[QAItem],
    answers,
    cfg: AlignConfig | None = None,
) -> MetricScore:
    """``answers`` is an (M, n_views) grid of chosen answer strings; None
    entries (missing answers) count as mismatches."""
    if not qa:
        raise MetricError("no questions")
    cfg = cfg or AlignConfig()
    answers = np.asarray(answers, dtype=object)
    if answers.shape != (len(qa), cfg.n_views):
        raise MetricError(
            f"answer matrix must be {(len(qa), cfg.n_views)}, got {answers.shape}"
        )
    correct = np.zeros(answers.shape, dtype=bool)
    for j, item in enumerate(qa):
        correct[j] = [a == item.gold for a in answers[j]]
    passed = np.array(
        [question_passes(correct[j], cfg.adjacency_radius) for j in range(len(qa))]
    )
    return MetricScore(
        name="text_3d_alignment",
        value=100.0 * passed.sum() / len(qa),
        evidence={
            "per_view_correct": correct,
            "question_passed": passed,
            "questions": [q.to_dict() for q in qa],
        },
    )
