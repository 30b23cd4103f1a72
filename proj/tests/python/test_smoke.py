"""Smoke tests for the python bindings: one pass over every exposed surface."""

import math

import pytest

import cpmon


def test_core_set_operations():
    probs = [0.1, 0.7, 0.2]
    assert cpmon.prediction_set(probs, 0.4, 0.8) == [1]
    assert cpmon.prediction_set(probs, 0.6, 0.8) == [1, 2]
    assert abs(cpmon.conformity_score(probs, 1, 0.5) - 0.35) < 1e-12
    # A dominant class with a small u empties the set.
    assert cpmon.prediction_set([0.99, 0.01], 0.1, 0.5) == []


def test_metrics():
    assert abs(cpmon.nse([0.25] * 4) - 1.0) < 1e-12
    assert cpmon.nse([1.0, 0.0, 0.0]) == 0.0
    soft = cpmon.softmax([2.0, 0.0, -1.0], 1.0)
    assert abs(sum(soft) - 1.0) < 1e-9
    assert soft[0] > soft[1] > soft[2]
    fitted = cpmon.fit_temperature([([3.0, 0.0, 0.0], 0), ([0.0, 3.0, 0.0], 1)])
    assert 0.05 < fitted < 20.0


def test_calibration_coverage_and_model_io(tmp_path):
    cal = cpmon.sample_stream("uncertain", 0, 2000, 1)
    test = cpmon.sample_stream("uncertain", 0, 5000, 2)
    model = cpmon.calibrate(cal, 0.1, 3)
    assert model.n_cal == 2000
    assert 0.0 < model.q_threshold <= 1.0
    coverage = cpmon.empirical_coverage(model, test, 4)
    assert 0.86 <= coverage <= 0.94

    path = tmp_path / "model.json"
    model.save(str(path))
    loaded = cpmon.load_model(str(path))
    assert loaded.q_threshold == model.q_threshold
    assert loaded.scores_sorted == model.scores_sorted
    assert cpmon.model_from_json(model.to_json()).k_index == model.k_index

    with pytest.raises(ValueError):
        cpmon.empirical_coverage(model, cal, 5)  # calibration split reuse


def test_detector_flags_severity_switch():
    model = cpmon.calibrate(cpmon.sample_stream("uncertain", 0, 2000, 5), 0.1, 6)
    detector = cpmon.Detector(model.baseline_avg_size, window=200)
    stream = cpmon.sample_stream("uncertain", 0, 400, 7) + cpmon.sample_stream(
        "uncertain", 2, 600, 8
    )
    first_alarm = None
    for i, (probs, _label) in enumerate(stream):
        size = len(model.predict_set(probs, (i % 97) / 97.0))
        if detector.update(size) and first_alarm is None:
            first_alarm = i
    assert first_alarm is not None and first_alarm >= 400
    summary = detector.summary()
    assert summary["alarm"] is True
    assert summary["samples_seen"] == 1000


def test_sweeps_and_determinism():
    rows = cpmon.severity_sweep("uncertain", [0.1], 200, 200, 11)
    assert len(rows) == 6
    assert rows[5]["avg_set_size"] > rows[0]["avg_set_size"]

    entropy = cpmon.entropy_sweep("overconfident", 500, 12)
    assert len(entropy) == 6
    assert max(entropy) - min(entropy) <= 0.05

    again = cpmon.sample_stream("overconfident", 3, 50, 13)
    assert again == cpmon.sample_stream("overconfident", 3, 50, 13)

    with pytest.raises(ValueError):
        cpmon.sample_stream("uncertain", 9, 10, 0)
