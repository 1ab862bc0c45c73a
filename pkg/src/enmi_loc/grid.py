"""Tessellation of the visible road into equal squares.

Tiles are squares on the road surface: ``side`` wide laterally and ``side``
long in ground distance ahead of the camera foot. Their camera-frame regions
(``x`` by optical-axis depth ``z``) feed the projected-area formula.

Rows run near to far, columns left to right, and the flat tile order used by
every amplitude vector is row-major, nearest row first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CameraConfig, RoadRegion, camera_depth, projected_area
from .noise import NoiseSpec

# Half-angle slack on the view boundaries. The reference parameter table quotes
# the fields of view to 0.1 deg, so each half-angle is only known to +-0.025 deg;
# tiles that touch the boundary exactly in the unrounded design must survive.
DEFAULT_FOV_SLACK_DEG = 0.025

VISIBILITY_MODES = ("angular", "focal")
LATTICES = ("centered", "straddle")


class EmptyGridError(ValueError):
    pass


@dataclass(frozen=True)
class Tile:
    row: int
    col: int
    region: RoadRegion
    ground_lower: float
    ground_upper: float
    area: float


@dataclass(frozen=True)
class TileGrid:
    cfg: CameraConfig
    side: float
    tiles: tuple

    @property
    def count(self) -> int:
        return len(self.tiles)

    def row_widths(self) -> list[int]:
        widths: dict[int, int] = {}
        for t in self.tiles:
            widths[t.row] = widths.get(t.row, 0) + 1
        return [widths[r] for r in sorted(widths)]

    def rows(self) -> np.ndarray:
        return np.array([t.row for t in self.tiles])

    def to_json_dict(self) -> dict:
        return {
            "camera": self.cfg.to_json_dict(),
            "side_cm": self.side,
            "tiles": [
                {
                    "row": t.row,
                    "col": t.col,
                    "x_l": t.region.x_lower,
                    "x_u": t.region.x_upper,
                    "z_l": t.region.z_lower,
                    "z_u": t.region.z_upper,
                    "d_l": t.ground_lower,
                    "d_u": t.ground_upper,
                    "area_cm2": t.area,
                }
                for t in self.tiles
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TileGrid":
        cfg = CameraConfig.from_json_dict(d["camera"])
        tiles = tuple(
            Tile(
                row=int(t["row"]),
                col=int(t["col"]),
                region=RoadRegion(t["x_l"], t["x_u"], t["z_l"], t["z_u"]),
                ground_lower=float(t["d_l"]),
                ground_upper=float(t["d_u"]),
                area=float(t["area_cm2"]),
            )
            for t in d["tiles"]
        )
        return cls(cfg, float(d["side_cm"]), tiles)


def view_depth_limits(cfg: CameraConfig, slack: float = 0.0) -> tuple[float, float]:
    """Ground distances of the near and far edges of the vertical view."""
    near = cfg.height / math.tan(cfg.pitch + cfg.vertical_fov / 2 + slack)
    far = cfg.height / math.tan(cfg.pitch - cfg.vertical_fov / 2 - slack)
    return near, far


def _max_half_width(cfg: CameraConfig, d: float, visibility: str, slack: float) -> float:
    # lateral limit at ground distance d; both limits grow with d
    t = math.tan(cfg.horizontal_fov / 2 + slack)
    if visibility == "angular":
        return t * math.hypot(d, cfg.height)
    return t * float(camera_depth(cfg, d))


def build_grid(
    cfg: CameraConfig,
    side: float,
    *,
    fov_slack_deg: float = DEFAULT_FOV_SLACK_DEG,
    visibility: str = "angular",
    lattice: str = "centered",
) -> TileGrid:
    """Every lattice square whose four corners fall inside the camera view.

    ``visibility="angular"`` bounds the yaw of each corner ray out of the
    camera's vertical symmetry plane by half the horizontal view;
    ``"focal"`` bounds ``|x~|`` on the focal plane instead. The vertical test
    is the same in both (``y~`` depends on depth only). Rows begin at the near
    edge of the view and advance one side length at a time.
    """
    if not side > 0:
        raise ValueError("side must be positive")
    if visibility not in VISIBILITY_MODES:
        raise ValueError(f"visibility must be one of {VISIBILITY_MODES}")
    if lattice not in LATTICES:
        raise ValueError(f"lattice must be one of {LATTICES}")
    slack = math.radians(fov_slack_deg)
    d0, _ = view_depth_limits(cfg)
    _, d_far = view_depth_limits(cfg, slack)

    tiles = []
    row = 0
    i = 0
    while d0 + (i + 1) * side <= d_far:
        d_l, d_u = d0 + i * side, d0 + (i + 1) * side
        i += 1
        # the nearer edge binds: both lateral limits increase with depth
        half = _max_half_width(cfg, d_l, visibility, slack)
        if lattice == "centered":
            k = math.floor((half - side / 2) / side + 1e-12)
            n = 2 * k + 1 if k >= 0 else 0
        else:
            n = 2 * math.floor(half / side + 1e-12)
        if n == 0:
            continue
        z_l, z_u = float(camera_depth(cfg, d_l)), float(camera_depth(cfg, d_u))
        x0 = -n * side / 2
        for col in range(n):
            region = RoadRegion(x0 + col * side, x0 + (col + 1) * side, z_l, z_u)
            tiles.append(Tile(row, col, region, d_l, d_u, projected_area(cfg, region)))
        row += 1
    if not tiles:
        raise EmptyGridError("field of view too narrow to contain a single tile")
    return TileGrid(cfg, float(side), tuple(tiles))


def tile_areas(grid: TileGrid) -> np.ndarray:
    return np.array([t.area for t in grid.tiles])


def tile_sigmas(grid: TileGrid, spec: NoiseSpec) -> np.ndarray:
    return np.sqrt(spec.psd / tile_areas(grid))
