"""Enhanced normalized mutual information (ENMI) for camera-based map matching."""
from .binning import BinningScheme
from .geometry import (
    CameraConfig,
    FocalPoint,
    GeometryError,
    RoadPoint,
    RoadRegion,
    depth_from_ytilde,
    jacobian,
    project_point,
    projected_area,
)
from .grid import Tile, TileGrid, build_grid, tile_areas, tile_sigmas
from .matcher import CandidateSection, MatchResult, Mode, best_match
from .mi import DegenerateScoreError, enmi_score, entropy, joint_likelihood, joint_standard, nmi, nmi_score
from .montecarlo import SimConfig, SweepResult, SweepRow, emit_curves, run_trial, sweep
from .noise import GaussianPrior, NoiseSpec, TileNoise, bin_posterior, effective_snr, tile_likelihood, tile_variance
from .variance_mask import VarianceMask, accumulate_mask, mask_preview

__version__ = "0.1.0"
