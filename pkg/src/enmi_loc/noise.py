"""Per-tile acquisition noise: variance, effective SNR and the amplitude posterior.

White focal-plane noise with power spectral density ``N0`` integrates over a
tile footprint of area ``A~`` to a Gaussian perturbation whose variance, on the
normalised amplitude scale, is ``N0 / A~``. Small far-away tiles are noisier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .binning import BinningScheme

# sigma below this fraction of the narrowest bin is treated as noiseless
DEGENERATE_SIGMA_FRACTION = 1e-6


@dataclass(frozen=True)
class NoiseSpec:
    psd: float

    def __post_init__(self):
        if not self.psd > 0:
            raise ValueError(f"psd must be > 0, got {self.psd}")


@dataclass(frozen=True)
class TileNoise:
    variance: float

    def __post_init__(self):
        if not self.variance >= 0:
            raise ValueError("variance must be nonnegative")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class GaussianPrior:
    """Optional amplitude prior for the posterior weights (default is uniform over bins)."""

    mean: float = 128.0
    std: float = 32.0


def _check_area(area):
    if not area > 0:
        raise ValueError(f"projected area must be positive, got {area}")


def tile_variance(area: float, spec: NoiseSpec) -> TileNoise:
    _check_area(area)
    return TileNoise(spec.psd / area)


def effective_snr(amplitude: float, area: float, spec: NoiseSpec) -> float:
    _check_area(area)
    return amplitude**2 * area / spec.psd


def tile_likelihood(a_k, v_k, noise: TileNoise):
    """Gaussian likelihood of true amplitude ``a_k`` given observation ``v_k``."""
    if not noise.variance > 0:
        raise ValueError("likelihood needs a positive variance")
    s = noise.std
    return np.exp(-((np.asarray(a_k) - v_k) ** 2) / (2 * noise.variance)) / (math.sqrt(2 * math.pi) * s)


def bin_posteriors(values, sigmas, binning: BinningScheme, prior: GaussianPrior | None = None) -> np.ndarray:
    """Posterior weight over amplitude bins for each noisy observation.

    Row ``k`` integrates the Gaussian around ``values[k]`` (std ``sigmas[k]``)
    over every bin; the mass below the first interior edge lands in bin 0 and
    the mass above the last one in the top bin, so each row sums to one.
    Returns an ``(m, B)`` array.
    """
    v = np.atleast_1d(np.asarray(values, dtype=float))
    s = np.broadcast_to(np.asarray(sigmas, dtype=float), v.shape).copy()
    if np.any(s < 0):
        raise ValueError("sigmas must be nonnegative")
    centre = v
    if prior is not None:
        var, pvar = s**2, prior.std**2
        centre = (v * pvar + prior.mean * var) / (pvar + var)
        s = np.sqrt(var * pvar / (pvar + var))

    B = binning.bin_count
    out = np.empty((v.size, B))
    sharp = s < DEGENERATE_SIGMA_FRACTION * binning.min_width
    if np.any(sharp):
        rows = np.flatnonzero(sharp)
        out[rows] = 0.0
        out[rows, binning.index(centre[rows])] = 1.0
    soft = ~sharp
    if np.any(soft):
        inner = binning.edges[1:-1]
        z = (inner[None, :] - centre[soft, None]) / s[soft, None]
        cdf = ndtr(z)
        m = cdf.shape[0]
        cdf = np.hstack([np.zeros((m, 1)), cdf, np.ones((m, 1))])
        out[soft] = np.diff(cdf, axis=1)
    return out


def bin_posterior(v_k: float, noise: TileNoise, binning: BinningScheme, prior: GaussianPrior | None = None) -> np.ndarray:
    return bin_posteriors([v_k], [noise.std], binning, prior)[0]
