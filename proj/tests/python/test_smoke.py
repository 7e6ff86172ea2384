"""Smoke tests for the Python bindings."""

import numpy as np
import pytest

import patchwork as pw


def test_zone_boundaries_defaults():
    edges = pw.zone_boundaries()
    assert edges == pytest.approx([2.7, 12.3625, 22.025, 41.35, 80.0], abs=1e-12)


def test_default_config_mentions_every_section():
    text = pw.default_config()
    for section in ("[czm]", "[rgpf]", "[gle]", "[pipeline]", "[ransac]", "[scene]"):
        assert section in text
    params = pw.Params.from_toml(text)
    assert params.to_toml() == text


def test_synth_segment_evaluate_roundtrip():
    spec = pw.SceneSpec()
    spec.ground_points = 40000
    spec.wall_points = 800
    points, labels = pw.synth_scene(spec, seed=3)
    assert points.shape == (points.shape[0], 4)
    assert points.dtype == np.float32
    assert labels.shape == (points.shape[0],)

    result = pw.segment(points)
    ground = result.ground_indices
    nonground = result.nonground_indices
    assert len(ground) + len(nonground) == len(points)
    assert len(np.intersect1d(ground, nonground)) == 0
    assert result.total_bins == 504
    assert result.timing.total_us >= 0

    truth = pw.ground_truth_mask(points, labels)
    scores = pw.evaluate(result.ground_mask(), truth)
    assert scores["precision"] >= 0.97
    assert scores["recall"] >= 0.97

    # No wall point may be predicted ground.
    wall = labels == 50
    assert not np.any(result.ground_mask() & wall)


def test_segment_is_deterministic():
    points, _ = pw.synth_scene(pw.SceneSpec(), seed=5)
    a = pw.segment(points)
    b = pw.segment(points)
    assert np.array_equal(a.ground_indices, b.ground_indices)


def test_variants_and_ransac():
    spec = pw.SceneSpec()
    spec.ground_points = 15000
    spec.roof_points = 400
    points, labels = pw.synth_scene(spec, seed=7)

    roof = labels == 10
    with_u = pw.segment(points, variant="czm+U")
    with_ue = pw.segment(points, variant="czm+U+E")
    assert np.any(with_u.ground_mask() & roof)
    assert not np.any(with_ue.ground_mask() & roof)

    baseline = pw.segment_ransac(points, dist_thresh=0.3, max_iters=200, seed=1)
    assert len(baseline.ground_indices) > 10000

    with pytest.raises(ValueError):
        pw.segment(points, variant="nope")


def test_kitti_io_roundtrip(tmp_path):
    points, _ = pw.synth_scene(pw.SceneSpec(), seed=11)
    path = tmp_path / "frame.bin"
    pw.write_kitti_bin(points, path)
    assert path.stat().st_size == 16 * len(points)
    reread = pw.read_kitti_bin(path)
    assert np.array_equal(points, reread)

    with pytest.raises(ValueError):
        pw.read_kitti_labels(path, 1)
