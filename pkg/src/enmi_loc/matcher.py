from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .binning import BinningScheme
from .grid import TileGrid, tile_sigmas
from .mi import DegenerateScoreError, enmi_score, nmi_score
from .noise import GaussianPrior, NoiseSpec

# Score assigned when every tile pair falls in one joint cell: two constant
# images agree perfectly, which is the upper limit of the ratio.
DEGENERATE_SCORE = 2.0


class Mode(str, Enum):
    NMI = "nmi"
    ENMI = "enmi"


@dataclass(frozen=True)
class CandidateSection:
    id: Any
    values: np.ndarray
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MatchResult:
    best_id: Any
    best_index: int
    scores: list
    mode: Mode


def score_candidate(capture, values, mode: Mode, sigmas, binning: BinningScheme, prior=None) -> float:
    try:
        if mode is Mode.NMI:
            return nmi_score(capture, values, binning)
        return enmi_score(capture, values, sigmas, binning, prior)
    except DegenerateScoreError:
        return DEGENERATE_SCORE


def best_match(
    capture,
    candidates: Sequence[CandidateSection],
    mode: Mode | str,
    grid: TileGrid,
    spec: NoiseSpec,
    binning: BinningScheme,
    prior: GaussianPrior | None = None,
    sigmas=None,
) -> MatchResult:
    """Pick the candidate section whose score against ``capture`` is largest.

    Ties go to the earliest candidate in list order. ``sigmas`` overrides the
    per-tile noise derived from ``grid`` and ``spec`` (ENMI mode only).
    """
    mode = Mode(mode)
    if not candidates:
        raise ValueError("no candidate sections to match against")
    capture = np.asarray(capture, dtype=float)
    if capture.shape != (grid.count,):
        raise ValueError(f"capture has {capture.size} tiles, grid has {grid.count}")
    if sigmas is None:
        sigmas = tile_sigmas(grid, spec)
    scores = []
    for c in candidates:
        values = np.asarray(c.values, dtype=float)
        if values.shape != capture.shape:
            raise ValueError(f"candidate {c.id!r} has {values.size} tiles, grid has {grid.count}")
        scores.append(score_candidate(capture, values, mode, sigmas, binning, prior))
    best = int(np.argmax(scores))  # first maximum wins
    return MatchResult(candidates[best].id, best, scores, mode)
