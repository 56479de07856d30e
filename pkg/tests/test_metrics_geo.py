import numpy as np
import pytest

from eval3d.errors import MetricError
from eval3d.metrics import GeoConfig, geometric_consistency

from oracles import inlier_score_bruteforce


def _rotated_field(angles_deg):
    """(0,0,1) rotated per-pixel by the given angles about the y axis."""
    rad = np.radians(angles_deg)
    out = np.zeros((*angles_deg.shape, 3))
    out[..., 0] = np.sin(rad)
    out[..., 2] = np.cos(rad)
    return out


def _const_field(shape, vec):
    return np.broadcast_to(np.asarray(vec, dtype=np.float64), (*shape, 3)).copy()


def test_identical_normals_score_100():
    shape = (16, 16)
    n = _const_field(shape, [0, 0, 1])
    mask = np.ones(shape, dtype=bool)
    score = geometric_consistency([n], [n.copy()], [mask])
    assert score.value == 100.0


def test_uniform_rotations():
    shape = (16, 16)
    analytic = _const_field(shape, [0, 0, 1])
    mask = np.ones(shape, dtype=bool)
    for angle, expected in [(40.0, 0.0), (10.0, 100.0)]:
        predicted = _rotated_field(np.full(shape, angle))
        score = geometric_consistency([analytic], [predicted], [mask])
        assert score.value == expected


def test_half_inliers_scores_50():
    shape = (10, 10)
    analytic = _const_field(shape, [0, 0, 1])
    angles = np.full(shape, 10.0)
    angles[:5] = 40.0  # half at 10 deg, half at 40 deg
    predicted = _rotated_field(angles)
    mask = np.ones(shape, dtype=bool)
    score = geometric_consistency([analytic], [predicted], [mask])
    assert score.value == 50.0


def test_scripted_angles_match_bruteforce(rng):
    shape = (12, 12)
    views = []
    for _ in range(3):
        angles = rng.uniform(0.0, 60.0, size=shape)
        mask = rng.random(shape) > 0.2
        analytic = _const_field(shape, [0, 0, 1])
        predicted = _rotated_field(angles)
        views.append((analytic, predicted, mask))
    analytic, predicted, masks = map(list, zip(*views))
    score = geometric_consistency(analytic, predicted, masks)
    oracle = inlier_score_bruteforce(analytic, predicted, masks, 23.0)
    assert score.value == pytest.approx(oracle, abs=1e-12)


def test_threshold_monotonicity(rng):
    shape = (12, 12)
    analytic = _const_field(shape, [0, 0, 1])
    predicted = _rotated_field(rng.uniform(0.0, 60.0, size=shape))
    mask = np.ones(shape, dtype=bool)
    values = [
        geometric_consistency([analytic], [predicted], [mask], GeoConfig(delta_norm=d)).value
        for d in (5.0, 15.0, 23.0, 45.0)
    ]
    assert values == sorted(values)


def test_rotation_invariance(rng):
    # applying one rotation to both fields preserves every dot product
    shape = (8, 8)
    analytic = _const_field(shape, [0, 0, 1])
    predicted = _rotated_field(rng.uniform(0, 50, size=shape))
    mask = np.ones(shape, dtype=bool)
    theta = 0.7
    R = np.array(
        [[1, 0, 0],
         [0, np.cos(theta), -np.sin(theta)],
         [0, np.sin(theta), np.cos(theta)]]
    )
    a = geometric_consistency([analytic], [predicted], [mask]).value
    b = geometric_consistency([analytic @ R.T], [predicted @ R.T], [mask]).value
    assert a == pytest.approx(b, abs=1e-9)


def test_no_valid_pixels_errors():
    shape = (4, 4)
    n = _const_field(shape, [0, 0, 1])
    with pytest.raises(MetricError, match="no valid pixels"):
        geometric_consistency([n], [n], [np.zeros(shape, dtype=bool)])


def test_default_threshold_constant():
    assert GeoConfig().delta_norm == 23.0


def test_per_view_mean_mode():
    shape = (4, 4)
    analytic = _const_field(shape, [0, 0, 1])
    good = analytic.copy()
    bad = _rotated_field(np.full(shape, 40.0))
    full = np.ones(shape, dtype=bool)
    half = np.zeros(shape, dtype=bool)
    half[:2] = True  # 8 valid pixels vs 16
    pooled = geometric_consistency([analytic, analytic], [good, bad], [full, half])
    per_view = geometric_consistency(
        [analytic, analytic], [good, bad], [full, half], GeoConfig(per_view_mean=True)
    )
    assert pooled.value == pytest.approx(100.0 * 16 / 24)
    assert per_view.value == pytest.approx(50.0)
