from .common import MetricScore
from .depthnorm import align_depth, align_depth_auto, depth_to_normal
from .geometry import GeoConfig, angular_difference_deg, geometric_consistency
from .semantic import (
    SemConfig,
    bilinear_sample,
    calibrate_semantic_threshold,
    fuse_vertex_features,
    mean_channel_variance,
    semantic_consistency,
)
from .structural import (
    StructConfig,
    structural_consistency,
    structural_score_from_distances,
)
from .alignment import AlignConfig, question_passes, text_3d_alignment
from .aesthetics import aesthetic_elo, aesthetic_mean, bradley_terry_elo

__all__ = [
    "MetricScore",
    "align_depth",
    "align_depth_auto",
    "depth_to_normal",
    "GeoConfig",
    "angular_difference_deg",
    "geometric_consistency",
    "SemConfig",
    "bilinear_sample",
    "calibrate_semantic_threshold",
    "fuse_vertex_features",
    "mean_channel_variance",
    "semantic_consistency",
    "StructConfig",
    "structural_consistency",
    "structural_score_from_distances",
    "AlignConfig",
    "question_passes",
    "text_3d_alignment",
    "aesthetic_elo",
    "aesthetic_mean",
    "bradley_terry_elo",
]
