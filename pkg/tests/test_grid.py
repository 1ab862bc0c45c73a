import json
import math
from collections import Counter

import numpy as np
import pytest

from enmi_loc import NoiseSpec, RoadPoint, RoadRegion, project_point, projected_area
from enmi_loc.geometry import CameraConfig
from enmi_loc.grid import EmptyGridError, TileGrid, build_grid, tile_areas, tile_sigmas
from enmi_loc.reference import REFERENCE_CAMERA, REFERENCE_ROW_WIDTHS, REFERENCE_TILE_COUNT

SIDE = 20.0
SLACK = math.radians(0.025)


def world_rays(cam, x, d):
    """Camera-frame coordinates of road point (x, d) via an explicit pitch rotation."""
    th = cam.pitch
    p = np.array([x, -cam.height, d])  # world: lateral, up, forward
    z_axis = np.array([0.0, -math.sin(th), math.cos(th)])
    y_axis = np.array([0.0, math.cos(th), math.sin(th)])
    return p, float(p @ y_axis), float(p @ z_axis)


def corner_visible(cam, x, d, mode):
    p, yc, zc = world_rays(cam, x, d)
    if mode == "angular":
        yaw = math.asin(abs(p[0]) / np.linalg.norm(p))
        depression = math.atan2(-p[1], p[2])
        return (
            yaw <= cam.horizontal_fov / 2 + SLACK
            and cam.pitch - cam.vertical_fov / 2 - SLACK <= depression <= cam.pitch + cam.vertical_fov / 2 + SLACK
        )
    f = cam.focal_length
    return abs(f * p[0] / zc) <= f * math.tan(cam.horizontal_fov / 2 + SLACK) and abs(f * yc / zc) <= f * math.tan(
        cam.vertical_fov / 2 + SLACK
    )


def oracle_rows(cam, mode="angular"):
    d0 = cam.height / math.tan(cam.pitch + cam.vertical_fov / 2)
    counts = Counter()
    for i in range(-5, 40):
        d_l, d_u = d0 + i * SIDE, d0 + (i + 1) * SIDE
        if d_l <= 0:
            continue
        for c in range(-30, 31):
            x_l, x_u = (c - 0.5) * SIDE, (c + 0.5) * SIDE
            if all(corner_visible(cam, x, d, mode) for x in (x_l, x_u) for d in (d_l, d_u)):
                counts[i] += 1
    return [counts[i] for i in sorted(counts)]


def test_oracle_reproduces_reference_rows(ref_cam):
    assert oracle_rows(ref_cam) == REFERENCE_ROW_WIDTHS


def test_reference_grid(ref_grid):
    assert ref_grid.count == REFERENCE_TILE_COUNT == 66
    assert ref_grid.row_widths() == REFERENCE_ROW_WIDTHS


@pytest.mark.parametrize("mode", ["angular", "focal"])
@pytest.mark.parametrize("pitch,hfov", [(35.902, 70.5), (40.0, 60.0), (30.0, 90.0)])
def test_grid_matches_oracle(mode, pitch, hfov):
    cam = CameraConfig.from_degrees(0.0367, 58.3095, pitch, 39.3, hfov)
    assert build_grid(cam, SIDE, visibility=mode).row_widths() == oracle_rows(cam, mode)


def test_focal_visibility_differs(ref_cam):
    g = build_grid(ref_cam, SIDE, visibility="focal")
    assert g.row_widths() != REFERENCE_ROW_WIDTHS


def test_without_slack_near_row_loses_tiles(ref_cam):
    assert build_grid(ref_cam, SIDE, fov_slack_deg=0.0).row_widths()[0] == 3


def test_corners_inside_view(ref_grid, ref_cam):
    f = ref_cam.focal_length
    for t in ref_grid.tiles:
        r = t.region
        for x in (r.x_lower, r.x_upper):
            for z in (r.z_lower, r.z_upper):
                q = project_point(ref_cam, RoadPoint(x, z))
                assert abs(q.y) <= f * math.tan(ref_cam.vertical_fov / 2 + SLACK)


def test_projection_agrees_with_rotation_oracle(ref_cam):
    for x, d in [(0, 40), (-50, 40), (130, 190), (17.5, 123.0)]:
        p, yc, zc = world_rays(ref_cam, x, d)
        q = project_point(ref_cam, RoadPoint(x, zc))
        f = ref_cam.focal_length
        assert q.x == pytest.approx(f * x / zc, rel=1e-12)
        assert q.y == pytest.approx(f * yc / zc, rel=1e-9, abs=1e-15)


def test_tiles_are_disjoint_squares(ref_grid):
    tiles = ref_grid.tiles
    for t in tiles:
        assert t.region.x_upper - t.region.x_lower == pytest.approx(SIDE)
        assert t.ground_upper - t.ground_lower == pytest.approx(SIDE)
    for i, a in enumerate(tiles):
        for b in tiles[i + 1 :]:
            overlap_x = min(a.region.x_upper, b.region.x_upper) - max(a.region.x_lower, b.region.x_lower)
            overlap_d = min(a.ground_upper, b.ground_upper) - max(a.ground_lower, b.ground_lower)
            assert overlap_x <= 1e-9 or overlap_d <= 1e-9


def test_order_is_row_major_near_first(ref_grid):
    keys = [(t.row, t.col) for t in ref_grid.tiles]
    assert keys == sorted(keys)
    xs = [t.region.x_lower for t in ref_grid.tiles if t.row == 3]
    assert xs == sorted(xs)
    depths = [t.ground_lower for t in ref_grid.tiles]
    assert depths == sorted(depths)


def test_mirror_symmetry(ref_grid):
    boxes = {(round(t.region.x_lower, 9), round(t.region.x_upper, 9), t.row) for t in ref_grid.tiles}
    for lo, hi, row in boxes:
        assert (round(-hi, 9), round(-lo, 9), row) in boxes


def test_areas(ref_grid, ref_cam):
    areas = tile_areas(ref_grid)
    assert np.all(areas > 0)
    rows = ref_grid.rows()
    for t, a in zip(ref_grid.tiles, areas):
        assert a == projected_area(ref_cam, t.region)
    # mirrored tiles in a row are equal; rows shrink with depth
    row_area = [areas[rows == r] for r in range(rows.max() + 1)]
    for ra in row_area:
        assert np.ptp(ra) <= 1e-15
    firsts = [ra[0] for ra in row_area]
    assert all(a > b for a, b in zip(firsts, firsts[1:]))


def test_row_area_additivity(ref_grid, ref_cam):
    areas = tile_areas(ref_grid)
    for r in range(8):
        tiles = [t for t in ref_grid.tiles if t.row == r]
        union = RoadRegion(tiles[0].region.x_lower, tiles[-1].region.x_upper, tiles[0].region.z_lower, tiles[0].region.z_upper)
        assert areas[ref_grid.rows() == r].sum() == pytest.approx(projected_area(ref_cam, union), rel=1e-12)


def test_sigmas(ref_grid):
    areas = tile_areas(ref_grid)
    s = tile_sigmas(ref_grid, NoiseSpec(float(areas[10])))
    assert s[10] == pytest.approx(1.0)
    s = tile_sigmas(ref_grid, NoiseSpec(0.01))
    np.testing.assert_allclose(s, np.sqrt(0.01 / areas))
    rows = ref_grid.rows()
    per_row = [s[rows == r].max() for r in range(8)]
    assert all(a <= b for a, b in zip(per_row, per_row[1:]))
    assert s[rows == 7].min() > s[rows == 0].max()


def test_sigmas_against_quadrature(ref_grid, ref_cam):
    from scipy import integrate

    from enmi_loc.geometry import jacobian_det

    s = tile_sigmas(ref_grid, NoiseSpec(0.01))
    for k in (0, 30, 65):
        r = ref_grid.tiles[k].region
        area, _ = integrate.dblquad(lambda z, x: jacobian_det(ref_cam, z), r.x_lower, r.x_upper, r.z_lower, r.z_upper, epsrel=1e-12)
        assert s[k] == pytest.approx(math.sqrt(0.01 / area), rel=1e-9)


def test_json_roundtrip(ref_grid):
    again = TileGrid.from_json_dict(json.loads(json.dumps(ref_grid.to_json_dict())))
    assert [(t.row, t.col) for t in again.tiles] == [(t.row, t.col) for t in ref_grid.tiles]
    np.testing.assert_array_equal(tile_areas(again), tile_areas(ref_grid))


def test_narrow_view_is_empty():
    cam = CameraConfig.from_degrees(0.0367, 58.3095, 35.902, 39.3, 1e-6)
    with pytest.raises(EmptyGridError):
        build_grid(cam, SIDE)


def test_straddle_lattice_even_widths(ref_cam):
    widths = build_grid(ref_cam, SIDE, lattice="straddle").row_widths()
    assert all(w % 2 == 0 for w in widths)
