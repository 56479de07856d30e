"""Shared metric result container."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MetricError


@dataclass
class MetricScore:
    """A 0-100% score plus the evidence it was reduced from.

    ``evidence`` holds metric-specific arrays or tables (per-pixel angular
    maps, per-vertex variances, per-pair distances, the per-question pass
    matrix, per-view scalars); the pipeline serializes them next to the
    run report.
    """

    name: str
    value: float
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.value <= 100.0:
            raise MetricError(f"{self.name}: score {self.value} outside [0, 100]")
