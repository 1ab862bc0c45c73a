"""Joint amplitude histograms and the (enhanced) normalized mutual information.

Histograms are indexed ``[capture_bin, map_bin]``. The standard construction
drops a unit weight per tile pair; the likelihood construction spreads each
pair's unit weight along the capture axis according to the posterior over the
true tile amplitude, leaving the (noiseless) map bin fixed.
"""
from __future__ import annotations

import numpy as np

from .binning import BinningScheme
from .noise import GaussianPrior, bin_posteriors


class DegenerateScoreError(ArithmeticError):
    """Joint entropy is zero, so the NMI ratio is undefined."""


def _pair(capture, map_values):
    a = np.atleast_1d(np.asarray(capture, dtype=float))
    b = np.atleast_1d(np.asarray(map_values, dtype=float))
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"capture/map length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("empty amplitude vectors")
    return a, b


def joint_standard(capture, map_values, binning: BinningScheme) -> np.ndarray:
    a, b = _pair(capture, map_values)
    B = binning.bin_count
    cells = binning.index(a) * B + binning.index(b)
    counts = np.bincount(cells, minlength=B * B).reshape(B, B)
    return counts / a.size


def joint_likelihood(capture, map_values, sigmas, binning: BinningScheme, prior: GaussianPrior | None = None) -> np.ndarray:
    a, b = _pair(capture, map_values)
    s = np.asarray(sigmas, dtype=float)
    if s.shape != a.shape:
        raise ValueError(f"sigma length mismatch: {s.shape} vs {a.shape}")
    return joint_from_posterior(bin_posteriors(a, s, binning, prior), binning.index(b))


def joint_from_posterior(posterior: np.ndarray, map_bins) -> np.ndarray:
    """Place each row of ``posterior`` (capture-bin weights) in its map-bin column."""
    m, B = posterior.shape
    onehot = np.zeros((m, B))
    onehot[np.arange(m), map_bins] = 1.0
    return posterior.T @ onehot / m


def entropy(pmf, base: float = 2.0) -> float:
    p = np.asarray(pmf, dtype=float).ravel()
    if np.any(p < 0):
        raise ValueError("negative probability")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"pmf sums to {total}, not 1")
    p = p[p > 0]
    return float(-(p * np.log(p)).sum() / np.log(base))


def nmi(hist, base: float = 2.0) -> float:
    """``(H[A] + H[B]) / H[A,B]`` of a normalized joint histogram."""
    h = np.asarray(hist, dtype=float)
    h_joint = entropy(h, base)
    if h_joint <= 0.0:
        raise DegenerateScoreError("all joint mass in one cell")
    return (entropy(h.sum(axis=1), base) + entropy(h.sum(axis=0), base)) / h_joint


def nmi_score(capture, map_values, binning: BinningScheme) -> float:
    return nmi(joint_standard(capture, map_values, binning))


def enmi_score(capture, map_values, sigmas, binning: BinningScheme, prior: GaussianPrior | None = None) -> float:
    return nmi(joint_likelihood(capture, map_values, sigmas, binning, prior))
