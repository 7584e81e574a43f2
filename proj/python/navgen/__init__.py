"""LiDAR scans + trajectory -> fused 2D navigation map."""

from navgen._navgen import (
    NavgenError,
    astar,
    build_map,
    generate_dataset,
    morph_close,
    read_map,
    scene_presets,
    validate,
)

__all__ = [
    "NavgenError",
    "astar",
    "build_map",
    "generate_dataset",
    "morph_close",
    "read_map",
    "scene_presets",
    "validate",
]
