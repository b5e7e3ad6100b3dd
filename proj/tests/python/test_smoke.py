import json

import numpy as np
import pytest

import trailroute as tr


def test_fit_affine_recovers_exact_transform():
    gcps = [((1, 1), (35.0, 139.0)), ((1, 101), (35.0, 139.001)), ((101, 1), (34.999, 139.0))]
    t = tr.fit_affine(gcps)
    lat, lon = t.to_geo(51, 51)
    assert lat == pytest.approx(34.9995, abs=1e-12)
    assert lon == pytest.approx(139.0005, abs=1e-12)
    row, col = t.inverse().to_image(lat, lon)
    assert (row, col) == pytest.approx((51, 51), abs=1e-6)


def test_degenerate_gcps_raise():
    with pytest.raises(tr.Error, match=r"\[georef\]"):
        tr.fit_affine([((1, 1), (35, 139)), ((2, 2), (35.1, 139.1)), ((3, 3), (35.2, 139.2))])


def test_projection_round_trip():
    e, n = tr.to_metric(35.0, 139.7)
    assert (e, n) == pytest.approx((381369.3377, 3873815.0747), abs=1e-3)
    assert tr.from_metric(e, n) == pytest.approx((35.0, 139.7), abs=1e-9)


def test_chamfer_single_points():
    assert tr.chamfer([(0, 0)], [(3, 4)]) == pytest.approx(5.0)


def test_skeleton_of_bar_is_thin():
    mask = np.zeros((15, 40), dtype=np.uint8)
    mask[5:10, 3:37] = 1
    skel = tr.skeletonize(mask)
    assert skel.shape == mask.shape
    assert 0 < skel.sum() < mask.sum()
    assert not (skel[:-1, :-1] & skel[1:, :-1] & skel[:-1, 1:] & skel[1:, 1:]).any()


def test_gpx_round_trip():
    pts = [(35.0, 139.7), (35.0012345, 139.7012345)]
    doc = tr.encode_gpx(pts, "walk")
    assert "<name>walk</name>" in doc
    back = tr.decode_gpx(doc)
    assert len(back) == len(pts)
    for got, want in zip(back, pts):
        assert got == pytest.approx(want, abs=1e-7)


def test_scene_mask_png_and_manifest(tmp_path):
    manifest = tr.write_scene(2, tmp_path, "syn")
    m = tr.load_manifest(manifest)
    assert m["maps"][0]["id"] == "syn"
    trail = m["maps"][0]["trails"][0]
    mask = tr.load_mask(tmp_path / trail["mask"])
    scene = tr.generate_scene(2)
    assert np.array_equal(mask, scene["mask"])
    seg = tr.segment_by_color(scene["image"], scene["color"])
    assert tr.iou(seg, scene["mask"]) > 0.95

    # A mask written from Python goes through the same PNG contract.
    tr.save_mask(mask, tmp_path / "copy.png")
    assert np.array_equal(tr.load_mask(tmp_path / "copy.png"), mask)


def test_cli_extract_in_process(tmp_path):
    tr.write_scene(4, tmp_path, "syn")
    scene = tr.generate_scene(4)
    start = "{},{}".format(*scene["start"])
    goal = "{},{}".format(*scene["goal"])
    code, out, err = tr.run_cli([
        "extract", "--gcps", str(tmp_path / "gcps.json"), "--mask", str(tmp_path / "trail_mask.png"),
        "--osm", str(tmp_path / "roads.osm"), "--start", start, "--goal", goal,
        "--out", str(tmp_path / "out.gpx"),
    ])
    assert code == 0, err
    assert len(tr.decode_gpx((tmp_path / "out.gpx").read_text())) >= 2


def test_ablation_rows():
    rows = tr.ablate_synthetic(1, seed=3)
    assert [r["strategy"] for r in rows] == ["E2E+IR", "GP+IR", "Hybrid+IR", "Hybrid"]
    assert all(r["error"] == "" for r in rows)
    json.dumps(rows)
