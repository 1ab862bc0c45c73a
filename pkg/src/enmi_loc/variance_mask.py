"""Empirical per-pixel noise variance from aligned local/prior image pairs.

For ``n`` pre-aligned pairs the mask is::

    Var[i, j] = 1/(n-1) * sum_k (a_ij^(k) - prior_ij^(k))^2

The prior image stands in for the mean: the result measures spread about
the map, not the classical sample variance about the empirical mean.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from ._io import atomic_write
from .pgm import read_pgm


class MaskError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class VarianceMask:
    variance: np.ndarray  # (height, width); NaN where the pixel is invalid
    sample_count: int

    @property
    def height(self) -> int:
        return self.variance.shape[0]

    @property
    def width(self) -> int:
        return self.variance.shape[1]

    @property
    def valid(self) -> np.ndarray:
        return ~np.isnan(self.variance)


class MaskAccumulator:
    """Streaming sum of squared local-minus-prior differences."""

    def __init__(self, valid=None):
        self._sum = None
        self.count = 0
        self._valid = None if valid is None else np.asarray(valid, dtype=bool)

    def add(self, local, prior) -> None:
        a = np.asarray(local, dtype=float)
        p = np.asarray(prior, dtype=float)
        if a.ndim != 2 or a.shape != p.shape:
            raise MaskError(f"pair dimension mismatch: {a.shape} vs {p.shape}")
        if self._sum is None:
            if self._valid is not None and self._valid.shape != a.shape:
                raise MaskError(f"validity mask {self._valid.shape} does not match images {a.shape}")
            self._sum = np.zeros(a.shape)
        elif a.shape != self._sum.shape:
            raise MaskError(f"image size {a.shape} differs from earlier pairs {self._sum.shape}")
        self._sum += (a - p) ** 2
        self.count += 1

    def merge(self, other: "MaskAccumulator") -> "MaskAccumulator":
        if other._sum is not None:
            if self._sum is None:
                self._sum = np.zeros_like(other._sum)
            self._sum += other._sum
            self.count += other.count
        return self

    def result(self) -> VarianceMask:
        if self.count < 2:
            raise MaskError(f"need n >= 2 image pairs, got {self.count}")
        var = self._sum / (self.count - 1)
        if self._valid is not None:
            var = np.where(self._valid, var, np.nan)
        return VarianceMask(var, self.count)


def accumulate_mask(pairs: Iterable, valid=None) -> VarianceMask:
    acc = MaskAccumulator(valid)
    for local, prior in pairs:
        acc.add(local, prior)
    return acc.result()


def mask_preview(mask: VarianceMask) -> np.ndarray:
    """Min-max scale the variance to 0..255 (uint8); invalid pixels render black."""
    var = mask.variance
    out = np.zeros(var.shape, dtype=np.uint8)
    ok = mask.valid
    if not ok.any():
        return out
    lo, hi = var[ok].min(), var[ok].max()
    if hi > lo:
        out[ok] = np.rint((var[ok] - lo) / (hi - lo) * 255).astype(np.uint8)
    return out


def mask_to_csv(mask: VarianceMask) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "variance"])
    for i in range(mask.height):
        for j in range(mask.width):
            v = mask.variance[i, j]
            w.writerow([i, j, "nan" if np.isnan(v) else repr(float(v))])
    return buf.getvalue()


def write_mask_csv(mask: VarianceMask, path) -> None:
    with atomic_write(path, newline="") as fh:
        fh.write(mask_to_csv(mask))


def read_manifest(path) -> list[tuple[Path, Path]]:
    """Pair paths from a ``local_path,prior_path`` CSV; relative paths resolve against the manifest."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"local_path", "prior_path"} - set(reader.fieldnames or ())
        if missing:
            raise MaskError(f"manifest lacks column(s) {sorted(missing)}")
        rows = [(path.parent / r["local_path"], path.parent / r["prior_path"]) for r in reader]
    return rows


def mask_from_manifest(manifest, valid_path=None) -> VarianceMask:
    valid = None
    if valid_path is not None:
        valid = read_pgm(valid_path) > 0
    pairs = ((read_pgm(a), read_pgm(b)) for a, b in read_manifest(manifest))
    return accumulate_mask(pairs, valid)


def radial_sigma(shape, sigma_centre: float = 3.0, sigma_edge: float = 24.0) -> np.ndarray:
    """Noise std growing linearly with distance from the image centre."""
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w]
    r = np.hypot(yy - (h - 1) / 2, xx - (w - 1) / 2)
    return sigma_centre + (sigma_edge - sigma_centre) * r / r.max()


def synthetic_pairs(sigma: np.ndarray, n: int, rng: np.random.Generator, prior_level: float = 128.0):
    """Yield ``n`` (local, prior) 8-bit pairs: constant prior, local = prior + N(0, sigma^2)."""
    prior = np.full(sigma.shape, prior_level)
    prior_img = np.clip(np.rint(prior), 0, 255).astype(np.uint8)
    for _ in range(n):
        local = np.clip(np.rint(prior + sigma * rng.standard_normal(sigma.shape)), 0, 255).astype(np.uint8)
        yield local, prior_img
