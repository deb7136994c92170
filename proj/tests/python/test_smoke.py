"""Smoke tests for the Python surface of the pipeline."""

import math

import pytest

import bitsentry


def test_byte_histogram_counts_bytes():
    bins = bitsentry.byte_histogram(bytes([0x00, 0x00, 0xFF, 0xFF]))
    assert len(bins) == 256
    assert bins[0x00] == 0.5
    assert bins[0xFF] == 0.5
    assert math.isclose(sum(bins), 1.0, abs_tol=1e-12)


def test_empty_payload_is_an_error():
    with pytest.raises(bitsentry.Error):
        bitsentry.byte_histogram(b"")


def test_label_and_model_tables():
    assert len(bitsentry.label_names()) == 5
    assert "malicious_rs232" in bitsentry.label_names()
    assert "random_forest" in bitsentry.model_names()
    assert len(bitsentry.model_names()) == 6


def test_tsvd_recovers_an_orthonormal_basis():
    x = [[0.0] * 256 for _ in range(3)]
    for i in range(3):
        x[i][i] = 1.0
    proj = bitsentry.fit_tsvd(x, 3)
    assert proj.rank == 3
    assert all(abs(sv - 1.0) < 1e-9 for sv in proj.singular_values)
    scores = proj.transform(x)
    for i in range(3):
        for j in range(3):
            assert abs(scores[i][j] - (1.0 if i == j else 0.0)) < 1e-9


def test_smote_balances_and_keeps_originals():
    x = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [10.0, 10.0]]
    y = [0, 0, 0, 1]
    x2, y2 = bitsentry.smote(x, y, seed=3)
    assert y2.count(0) == y2.count(1) == 3
    assert x2[: len(x)] == x
    assert y2[: len(y)] == y


def test_classifier_fit_and_predict():
    x = [[0.0, 0.0], [0.5, 0.1], [0.1, 0.4], [5.0, 5.0], [5.5, 4.9], [4.8, 5.2]]
    y = [0, 0, 0, 1, 1, 1]
    clf = bitsentry.fit_classifier("knn", x, y, seed=1)
    assert clf.kind == "knn"
    assert clf.predict([[0.2, 0.2], [5.1, 5.1]]) == [0, 1]
    proba = clf.predict_proba([[0.2, 0.2]])
    assert math.isclose(sum(proba[0]), 1.0, abs_tol=1e-12)


def test_end_to_end_pipeline(tmp_path):
    manifest = bitsentry.generate_dataset(str(tmp_path / "data"), n_samples=40, seed=11)
    bundle = str(tmp_path / "model.bsdm")
    outcome = bitsentry.train(manifest, bundle, rank=8, models=["knn", "naive_bayes"])
    assert outcome["best_model"] in {"knn", "naive_bayes"}
    assert outcome["digest"].startswith("fnv1a64:")
    assert outcome["report"]["best_model"] == outcome["best_model"]

    target = next(iter(sorted((tmp_path / "data").glob("malicious_rs232_*.bit"))))
    report = bitsentry.predict_file(bundle, str(target))
    assert report["predicted"] in bitsentry.label_names()
    assert 0.0 <= report["confidence"] <= 1.0
    assert report["load_ms"] >= 0.0

    second = bitsentry.evaluate(manifest, rank=8, models=["knn", "naive_bayes"])
    assert second["best_model"] == outcome["best_model"]


def test_bad_inputs_raise_the_module_error(tmp_path):
    with pytest.raises(bitsentry.Error):
        bitsentry.predict_file(str(tmp_path / "missing.bsdm"), "x.bit")
    with pytest.raises(bitsentry.Error):
        bitsentry.fit_tsvd([[1.0, 2.0], [3.0]], 1)
