import json
import sys

import numpy as np
import pytest

from eval3d.backends import (
    BackendRequest,
    ImageInput,
    QAItem,
    SubprocessBackend,
    TensorInput,
    invoke_backend,
    read_tensor,
)
from eval3d.backends.stubs import (
    GoldVQA,
    StubAesthetic,
    StubDepth,
    StubFeatures,
    StubNVS,
    StubPerceptual,
    StubQAGen,
    StubVQA,
    _ncc_distance,
    all_gold_qagen,
)
from eval3d.errors import BackendError


def _img(rng, h=16, w=16):
    return rng.integers(0, 256, size=(h, w, 3)).astype(np.uint8)


def test_depth_stub_echoes_reference(tmp_path, rng):
    ref = rng.random((8, 8)).astype(np.float32)
    req = BackendRequest(
        kind="depth",
        inputs={"ref_depth": TensorInput(ref)},
        params={"view_id": 0, "height": 8, "width": 8},
    )
    resp = invoke_backend(StubDepth(), req, tmp_path / "job")
    out = read_tensor(tmp_path / "job" / resp.outputs["depth"])
    assert out.tobytes() == ref.tobytes()
    assert resp.meta["depth_convention"] == "depth"


def test_depth_stub_disparity_mode(tmp_path):
    ref = np.full((8, 8), 2.0, np.float32)
    req = BackendRequest(
        kind="depth", inputs={"ref_depth": TensorInput(ref)},
        params={"height": 8, "width": 8},
    )
    resp = invoke_backend(StubDepth(convention="disparity"), req, tmp_path / "job")
    out = read_tensor(tmp_path / "job" / resp.outputs["depth"])
    np.testing.assert_allclose(out, 0.5)
    assert resp.meta["depth_convention"] == "disparity"


def test_perceptual_identical_images_zero(tmp_path, rng):
    img = _img(rng)
    req = BackendRequest(
        kind="perceptual",
        inputs={"image_a": ImageInput(img), "image_b": ImageInput(img)},
    )
    resp = invoke_backend(StubPerceptual(), req, tmp_path / "job")
    assert resp.outputs["distance"] == 0.0


def test_ncc_distance_properties(rng):
    a = rng.integers(0, 256, size=(8, 8, 3)).astype(np.uint8)
    assert _ncc_distance(a, a) == 0.0
    inverted = (255 - a.astype(np.int64)).astype(np.uint8)
    assert _ncc_distance(a, inverted) == 1.0  # anti-correlated, clamped
    flat = np.full_like(a, 7)
    assert _ncc_distance(flat, flat) == 0.0
    assert _ncc_distance(flat, a) == 1.0


def test_feature_shape_contract_violation(tmp_path):
    bad = StubFeatures(channels=64, resolution=128)
    req = BackendRequest(kind="features", params={"view_id": 0})
    with pytest.raises(BackendError, match="shape contract violated"):
        invoke_backend(bad, req, tmp_path / "job")


def test_scripted_features_and_miss(tmp_path):
    stub = StubFeatures(per_view={0: [0.0], 1: [1.0], 2: [2.0]})
    values = []
    for view_id in range(3):
        req = BackendRequest(kind="features", params={"view_id": view_id})
        resp = invoke_backend(stub, req, tmp_path / f"job{view_id}")
        fmap = read_tensor(tmp_path / f"job{view_id}" / resp.outputs["features"])
        assert fmap.shape == (1, 256, 256)
        values.append(float(fmap[0, 0, 0]))
    assert values == [0.0, 1.0, 2.0]
    # population variance of {0, 1, 2} = 2/3 drives the semantic fixture
    assert np.var(values) == pytest.approx(2.0 / 3.0)
    with pytest.raises(BackendError, match="no entry for view"):
        invoke_backend(stub, BackendRequest(kind="features", params={"view_id": 9}),
                       tmp_path / "missjob")


def test_nvs_stub_returns_target_and_perceptual_self_distance(tmp_path, rng):
    target = _img(rng)
    req = BackendRequest(
        kind="nvs",
        inputs={"source_image": ImageInput(_img(rng)), "ref_target_image": ImageInput(target)},
        params={"height": 16, "width": 16},
    )
    resp = invoke_backend(StubNVS(), req, tmp_path / "job")
    from PIL import Image

    predicted = np.asarray(Image.open(tmp_path / "job" / resp.outputs["image"]))
    np.testing.assert_array_equal(predicted, target)
    assert _ncc_distance(predicted, target) == 0.0


def test_qagen_scripted_and_miss(tmp_path):
    stub = all_gold_qagen("a brick house", n_questions=2)
    resp = invoke_backend(
        StubQAGen(table=stub.table),
        BackendRequest(kind="qagen", params={"prompt": "a brick house"}),
        tmp_path / "job",
    )
    items = [QAItem.from_dict(d) for d in resp.outputs["qa"]]
    assert len(items) == 2
    assert all(q.gold in q.choices for q in items)
    with pytest.raises(BackendError, match="no entry for prompt"):
        invoke_backend(
            StubQAGen(table=stub.table),
            BackendRequest(kind="qagen", params={"prompt": "unseen"}),
            tmp_path / "job2",
        )


def test_vqa_scripted_gold_and_miss(tmp_path, rng):
    table = {(0, "Is there a statue?"): "Yes"}
    stub = StubVQA(table=table)
    req = BackendRequest(
        kind="vqa",
        inputs={"image": ImageInput(_img(rng))},
        params={"view_id": 0, "question": "Is there a statue?", "choices": ["Yes", "No"]},
    )
    resp = invoke_backend(stub, req, tmp_path / "job")
    assert resp.outputs["answer"] == "Yes"
    miss = BackendRequest(
        kind="vqa", params={"view_id": 3, "question": "Is there a statue?",
                            "choices": ["Yes", "No"]},
    )
    with pytest.raises(BackendError, match="no entry"):
        invoke_backend(stub, miss, tmp_path / "job2")
    gold = BackendRequest(
        kind="vqa", params={"view_id": 3, "question": "q", "choices": ["a", "b"],
                            "gold": "b"},
    )
    resp = invoke_backend(GoldVQA(), gold, tmp_path / "job3")
    assert resp.outputs["answer"] == "b"


def test_vqa_answer_must_be_a_choice(tmp_path):
    stub = StubVQA(table={(0, "q"): "free text"})
    req = BackendRequest(kind="vqa", params={"view_id": 0, "question": "q",
                                             "choices": ["Yes", "No"]})
    with pytest.raises(BackendError, match="not among choices"):
        invoke_backend(stub, req, tmp_path / "job")


def test_aesthetic_stub_constant(tmp_path):
    resp = invoke_backend(
        StubAesthetic(value=1.25),
        BackendRequest(kind="aesthetic", params={"view_id": 0}),
        tmp_path / "job",
    )
    assert resp.outputs["score"] == 1.25


def test_job_directory_never_reused(tmp_path):
    req = BackendRequest(kind="aesthetic", params={})
    invoke_backend(StubAesthetic(), req, tmp_path / "job")
    with pytest.raises(BackendError, match="already exists"):
        invoke_backend(StubAesthetic(), req, tmp_path / "job")


def test_kind_routing_checked(tmp_path):
    req = BackendRequest(kind="depth", params={})
    with pytest.raises(BackendError, match="routed"):
        invoke_backend(StubAesthetic(), req, tmp_path / "job")


def test_qa_item_invariants():
    with pytest.raises(BackendError):
        QAItem(question="q", choices=("only",), gold="only")
    with pytest.raises(BackendError):
        QAItem(question="q", choices=("a", "b"), gold="c")


def test_every_kind_round_trips_through_protocol(tmp_path, rng):
    """One job per kind through prepare/dispatch/validate."""
    ref = rng.random((8, 8)).astype(np.float32)
    img = _img(rng, 8, 8)
    cases = [
        (StubDepth(), BackendRequest(
            kind="depth",
            inputs={"image": ImageInput(img), "ref_depth": TensorInput(ref)},
            params={"view_id": 0, "height": 8, "width": 8})),
        (StubFeatures(channels=3), BackendRequest(
            kind="features", inputs={"image": ImageInput(img)},
            params={"view_id": 0})),
        (StubNVS(), BackendRequest(
            kind="nvs",
            inputs={"source_image": ImageInput(img), "ref_target_image": ImageInput(img)},
            params={"height": 8, "width": 8})),
        (StubPerceptual(), BackendRequest(
            kind="perceptual",
            inputs={"image_a": ImageInput(img), "image_b": ImageInput(img)})),
        (all_gold_qagen("p"), BackendRequest(kind="qagen", params={"prompt": "p"})),
        (GoldVQA(), BackendRequest(
            kind="vqa", inputs={"image": ImageInput(img)},
            params={"view_id": 0, "question": "q", "choices": ["x", "y"], "gold": "x"})),
        (StubAesthetic(0.5), BackendRequest(
            kind="aesthetic", inputs={"image": ImageInput(img)},
            params={"view_id": 0})),
    ]
    for k, (stub, req) in enumerate(cases):
        resp = invoke_backend(stub, req, tmp_path / f"job-{k}")
        assert resp.ok
        job = tmp_path / f"job-{k}"
        assert (job / "request.json").exists()
        assert (job / "response.json").exists()
        parsed = json.loads((job / "request.json").read_text())
        assert parsed["kind"] == req.kind


def test_subprocess_backend_end_to_end(tmp_path, rng):
    ref = rng.random((4, 4)).astype(np.float32)
    backend = SubprocessBackend(
        kind="depth", command=[sys.executable, "-m", "eval3d.backends.stub_cli", "depth"]
    )
    req = BackendRequest(
        kind="depth", inputs={"ref_depth": TensorInput(ref)},
        params={"height": 4, "width": 4},
    )
    resp = invoke_backend(backend, req, tmp_path / "job")
    out = read_tensor(tmp_path / "job" / resp.outputs["depth"])
    assert out.tobytes() == ref.tobytes()


def test_subprocess_shape_violation_surfaces(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"channels": 64, "resolution": 128}))
    backend = SubprocessBackend(
        kind="features",
        command=[sys.executable, "-m", "eval3d.backends.stub_cli", "features",
                 "--config", str(cfg)],
    )
    req = BackendRequest(kind="features", params={"view_id": 0})
    with pytest.raises(BackendError, match="shape contract violated"):
        invoke_backend(backend, req, tmp_path / "job")


def test_timeout_env_override(monkeypatch):
    from eval3d.backends.protocol import TIMEOUT_ENV, backend_timeout_s

    monkeypatch.delenv(TIMEOUT_ENV, raising=False)
    assert backend_timeout_s() == 600.0
    monkeypatch.setenv(TIMEOUT_ENV, "12.5")
    assert backend_timeout_s() == 12.5


def test_subprocess_timeout(tmp_path):
    backend = SubprocessBackend(
        kind="depth",
        command=[sys.executable, "-c", "import time; time.sleep(30)"],
        timeout_s=0.5,
    )
    req = BackendRequest(kind="depth", params={})
    with pytest.raises(BackendError, match="timed out"):
        invoke_backend(backend, req, tmp_path / "job")


def test_subprocess_crash_carries_stderr(tmp_path):
    backend = SubprocessBackend(
        kind="depth",
        command=[sys.executable, "-c", "import sys; sys.stderr.write('boom!'); sys.exit(3)"],
    )
    req = BackendRequest(kind="depth", params={})
    with pytest.raises(BackendError, match="boom"):
        invoke_backend(backend, req, tmp_path / "job")
