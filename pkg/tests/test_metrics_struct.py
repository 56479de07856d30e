import numpy as np
import pytest

from eval3d.backends.stubs import StubNVS, StubPerceptual
from eval3d.camrig import RigSpec, build_rig
from eval3d.errors import MetricError
from eval3d.metrics import (
    StructConfig,
    structural_consistency,
    structural_score_from_distances,
)
from eval3d.raster import normal_to_rgb8, rasterize

TARGETS = (0.0, 90.0, 180.0, 270.0)


def _sphere_views_and_images(icosphere3):
    rig = build_rig(RigSpec(n_views=4, resolution=96))
    views = {v.azimuth: v for v in rig}
    images = {}
    for v in rig:
        buf = rasterize(icosphere3, v)
        images[v.azimuth] = normal_to_rgb8(buf.normal_map, buf.opacity)
    return views, images


def test_ground_truth_stubs_score_100(icosphere3, tmp_path):
    views, images = _sphere_views_and_images(icosphere3)
    score = structural_consistency(
        views, images, StubNVS(), StubPerceptual(), StructConfig(), tmp_path
    )
    assert score.value == 100.0
    assert set(score.evidence["per_input_similarity"]) == {0.0, 90.0}


def test_scripted_distances_exact_arithmetic(icosphere3, tmp_path):
    views, images = _sphere_views_and_images(icosphere3)
    table = {(0.0, t): 0.2 for t in TARGETS}
    table.update({(90.0, t): 0.4 for t in TARGETS})
    score = structural_consistency(
        views, images, StubNVS(), StubPerceptual(table=table), StructConfig(), tmp_path
    )
    # max(mean(1 - 0.2), mean(1 - 0.4)) = 0.8
    assert score.value == pytest.approx(80.0, abs=1e-12)
    assert score.evidence["best_input_azimuth"] == 0.0


def test_distance_one_everywhere_scores_0(icosphere3, tmp_path):
    views, images = _sphere_views_and_images(icosphere3)
    table = {(a, t): 1.0 for a in (0.0, 90.0) for t in TARGETS}
    score = structural_consistency(
        views, images, StubNVS(), StubPerceptual(table=table), StructConfig(), tmp_path
    )
    assert score.value == 0.0


def test_pure_arithmetic_form():
    cfg = StructConfig()
    table = {(0.0, t): d for t, d in zip(TARGETS, (0.1, 0.2, 0.3, 0.4))}
    table.update({(90.0, t): 0.5 for t in TARGETS})
    # means: 1 - 0.25 = 0.75 vs 0.5 -> 75
    assert structural_score_from_distances(table, cfg) == pytest.approx(75.0)


def test_missing_render_errors(icosphere3, tmp_path):
    views, images = _sphere_views_and_images(icosphere3)
    del images[180.0]
    with pytest.raises(MetricError, match="missing renders"):
        structural_consistency(
            views, images, StubNVS(), StubPerceptual(), StructConfig(), tmp_path
        )


def test_interval_must_divide_circle():
    with pytest.raises(MetricError):
        StructConfig(target_interval=77.0)
    assert StructConfig(target_interval=90.0).target_azimuths == TARGETS
