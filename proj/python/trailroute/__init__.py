"""Trail extraction from scanned maps: georeferencing, skeleton graphs and route refinement."""

import json as _json

from ._core import (
    AffineTransform,
    Error,
    ablate_synthetic,
    chamfer,
    decode_gpx,
    encode_gpx,
    fit_affine,
    from_metric,
    generate_scene,
    geodesic_distance,
    iou,
    load_gcps,
    load_image,
    load_mask,
    run_cli,
    save_image,
    save_mask,
    segment_by_color,
    skeletonize,
    to_metric,
    write_scene,
)
from ._core import manifest_json as _manifest_json


def load_manifest(path, check_files=True):
    """Dataset manifest as a dict, with paths relative to the manifest's directory."""
    return _json.loads(_manifest_json(str(path), check_files))


__all__ = [
    "AffineTransform",
    "Error",
    "ablate_synthetic",
    "chamfer",
    "decode_gpx",
    "encode_gpx",
    "fit_affine",
    "from_metric",
    "generate_scene",
    "geodesic_distance",
    "iou",
    "load_gcps",
    "load_image",
    "load_manifest",
    "load_mask",
    "run_cli",
    "save_image",
    "save_mask",
    "segment_by_color",
    "skeletonize",
    "to_metric",
    "write_scene",
]
