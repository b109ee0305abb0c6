"""Visual-guided repair of triangle meshes into watertight 2-manifold surfaces."""

from _meshrepair import (
    Config,
    Mesh,
    hausdorff_distance,
    is_manifold,
    is_watertight,
    load_mesh,
    repair,
    save_mesh,
)

__all__ = [
    "Config",
    "Mesh",
    "hausdorff_distance",
    "is_manifold",
    "is_watertight",
    "load_mesh",
    "repair",
    "save_mesh",
]
