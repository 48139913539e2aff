import pytest

import streamad


def small_config(**overrides):
    cfg = streamad.RunConfig()
    cfg.window_size = 10
    cfg.transition_count = 5
    cfg.threshold = 0.005
    cfg.warmup_groups = 0
    cfg.warmup_passes = 0
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


def test_kmeans_two_clusters():
    centroids, labels, iterations = streamad.kmeans([1.0, 2.0, 9.0, 10.0], 2)
    assert centroids == [1.5, 9.5]
    assert labels == [0, 0, 1, 1]
    assert iterations == 2


def test_kmeans_rejects_bad_k():
    with pytest.raises(ValueError):
        streamad.kmeans([1.0, 2.0], 3)


def test_transition_counts_include_self_loops():
    counts = streamad.count_transitions([0, 0, 1, 0])
    assert counts == {(0, 0): 1, (0, 1): 1, (1, 0): 1}


def test_detect_threshold_is_strict():
    seq = [0, 1] * 5
    assert streamad.detect(seq, 3, 1.0) is None
    assert streamad.detect([0, 0, 0, 1], 1, 0.5) == pytest.approx(1 / 3)


def test_group_round_trip():
    text = streamad.serialize_group(7, 3, 1200, [(1, 2.5), (4, -1.0)])
    group = streamad.parse_group(text)
    assert group == {
        "group_id": 7,
        "machine_id": 3,
        "timestamp": 1200,
        "readings": [(1, 2.5), (4, -1.0)],
    }


def test_malformed_message_raises():
    with pytest.raises(ValueError):
        streamad.parse_group("<og_1> <type> nonsense .")


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        streamad.validate_config(small_config(window_size=1))


@pytest.mark.parametrize("workers", [1, 3])
def test_engine_matches_oracle(workers):
    corpus, metadata = streamad.generate(machines=4, sensors=5, groups=300, seed=11)
    cfg = small_config(worker_count=workers)
    anomalies, report = streamad.run(corpus, metadata, cfg)
    expected = streamad.oracle(corpus, metadata, cfg)
    assert anomalies == expected
    assert report["messages"] == 4 * 300
    assert report["anomalies"] == len(anomalies)
    assert report["windows"] == (
        report["inout"] + report["k1"] + report["lowk"] + report["full"] + report["sorted"]
    )


def test_anomaly_ids_are_sequential():
    corpus, metadata = streamad.generate(machines=3, sensors=4, groups=400, seed=5)
    anomalies, _ = streamad.run(corpus, metadata, small_config(threshold=0.05))
    assert anomalies, "workload should produce anomalies"
    assert [a.anomaly_id for a in anomalies] == list(range(len(anomalies)))
    keys = [(a.timestamp, a.machine_id, a.property_id) for a in anomalies]
    assert keys == sorted(keys)
