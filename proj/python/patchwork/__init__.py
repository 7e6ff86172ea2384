"""Real-time LiDAR ground segmentation.

A point cloud is binned into a four-zone concentric polar grid, each bin gets
an iterative PCA plane fit seeded from its lowest points, and a per-bin
likelihood built from uprightness, elevation and flatness decides which
fitted patches are ground.
"""

from ._core import (
    IoError,
    MalformedInputError,
    Params,
    SceneSpec,
    SegmentationResult,
    StageTiming,
    ValidationError,
    default_config,
    evaluate,
    ground_truth_mask,
    read_kitti_bin,
    read_kitti_labels,
    segment,
    segment_ransac,
    synth_scene,
    write_kitti_bin,
    zone_boundaries,
)

__all__ = [
    "IoError",
    "MalformedInputError",
    "Params",
    "SceneSpec",
    "SegmentationResult",
    "StageTiming",
    "ValidationError",
    "default_config",
    "evaluate",
    "ground_truth_mask",
    "read_kitti_bin",
    "read_kitti_labels",
    "segment",
    "segment_ransac",
    "synth_scene",
    "write_kitti_bin",
    "zone_boundaries",
]
