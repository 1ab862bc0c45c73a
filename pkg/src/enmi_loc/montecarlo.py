"""Monte Carlo error probability of NMI vs ENMI matching over a sweep of N0.

Each trial draws a true road image ``a`` and an unrelated decoy ``u`` (i.i.d.
Gaussian tile amplitudes), observes ``V = a + N`` with per-tile noise variance
``N0 / A~_k``, and records an error for a method whenever the decoy scores at
least as high as the true section.

Every trial owns a Philox substream keyed by ``(seed, n0_index, trial_index)``,
so results do not depend on how trials are split across worker processes.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import reference
from ._io import atomic_write
from .binning import AMPLITUDE_RANGE, BinningScheme
from .geometry import CameraConfig
from .grid import DEFAULT_FOV_SLACK_DEG, TileGrid, build_grid, tile_sigmas
from .matcher import DEGENERATE_SCORE
from .mi import DegenerateScoreError, joint_from_posterior, joint_standard, nmi
from .noise import GaussianPrior, NoiseSpec, bin_posteriors

CSV_COLUMNS = ("n0", "trials", "nmi_errors", "enmi_errors", "nmi_error_rate", "enmi_error_rate")


@dataclass(frozen=True)
class SimConfig:
    camera: CameraConfig
    side: float = reference.REFERENCE_SIDE_CM
    amplitude_mean: float = reference.REFERENCE_AMPLITUDE_MEAN
    amplitude_std: float = reference.REFERENCE_AMPLITUDE_STD
    n0_values: tuple = (0.001, 0.01, 0.1, 1.0)
    trials: int = reference.REFERENCE_TRIALS
    seed: int = 0
    binning: BinningScheme = field(default_factory=BinningScheme.uniform)
    fov_slack_deg: float = DEFAULT_FOV_SLACK_DEG
    prior: GaussianPrior | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.amplitude_std > 0:
            raise ValueError("amplitude_std must be > 0")
        if not self.n0_values or any(not n0 > 0 for n0 in self.n0_values):
            raise ValueError("n0_values must be a non-empty list of positive PSDs")
        object.__setattr__(self, "n0_values", tuple(float(v) for v in self.n0_values))

    def grid(self) -> TileGrid:
        return build_grid(self.camera, self.side, fov_slack_deg=self.fov_slack_deg)

    def replace(self, **changes) -> "SimConfig":
        return replace(self, **changes)

    @classmethod
    def reference(cls, **overrides) -> "SimConfig":
        return cls(camera=CameraConfig.from_json_dict(reference.REFERENCE_CAMERA), **overrides)

    @classmethod
    def from_json_dict(cls, d: dict) -> "SimConfig":
        camera = CameraConfig.from_json_dict(d.get("camera", reference.REFERENCE_CAMERA))
        kwargs = {}
        for key, name in [
            ("side_cm", "side"),
            ("amplitude_mean", "amplitude_mean"),
            ("amplitude_std", "amplitude_std"),
            ("trials", "trials"),
            ("seed", "seed"),
            ("fov_slack_deg", "fov_slack_deg"),
        ]:
            if key in d:
                kwargs[name] = d[key]
        if "n0_values" in d:
            kwargs["n0_values"] = tuple(d["n0_values"])
        if "binning" in d:
            kwargs["binning"] = BinningScheme.from_json_dict(d["binning"])
        elif "bins" in d:
            kwargs["binning"] = BinningScheme.uniform(int(d["bins"]))
        if d.get("prior"):
            kwargs["prior"] = GaussianPrior(**d["prior"])
        return cls(camera=camera, **kwargs)

    @classmethod
    def load(cls, path) -> "SimConfig":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict:
        d = {
            "camera": self.camera.to_json_dict(),
            "side_cm": self.side,
            "amplitude_mean": self.amplitude_mean,
            "amplitude_std": self.amplitude_std,
            "n0_values": list(self.n0_values),
            "trials": self.trials,
            "seed": self.seed,
            "binning": self.binning.to_json_dict(),
            "fov_slack_deg": self.fov_slack_deg,
        }
        if self.prior is not None:
            d["prior"] = {"mean": self.prior.mean, "std": self.prior.std}
        return d


@dataclass(frozen=True)
class SweepRow:
    n0: float
    trials: int
    nmi_errors: int
    enmi_errors: int

    @property
    def nmi_error_rate(self) -> float:
        return self.nmi_errors / self.trials

    @property
    def enmi_error_rate(self) -> float:
        return self.enmi_errors / self.trials

    def standard_error(self, method: str) -> float:
        p = getattr(self, f"{method}_error_rate")
        return math.sqrt(p * (1 - p) / self.trials)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    def row(self, n0: float) -> SweepRow:
        for r in self.rows:
            if math.isclose(r.n0, n0, rel_tol=1e-12):
                return r
        raise KeyError(n0)

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows:
            lines.append(
                f"{r.n0!r},{r.trials},{r.nmi_errors},{r.enmi_errors},{r.nmi_error_rate!r},{r.enmi_error_rate!r}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SweepResult":
        reader = csv.DictReader(text.splitlines())
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = []
        for rec in reader:
            row = SweepRow(float(rec["n0"]), int(rec["trials"]), int(rec["nmi_errors"]), int(rec["enmi_errors"]))
            if float(rec["nmi_error_rate"]) != row.nmi_error_rate or float(rec["enmi_error_rate"]) != row.enmi_error_rate:
                raise ValueError(f"inconsistent error rates in row {rec}")
            rows.append(row)
        return cls(tuple(rows))


def trial_rng(seed: int, n0_index: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(n0_index, trial_index))
    return np.random.Generator(np.random.Philox(ss))


def draw_image(rng: np.random.Generator, m: int, mean: float, std: float) -> np.ndarray:
    lo, hi = AMPLITUDE_RANGE
    return np.clip(rng.normal(mean, std, m), lo, np.nextafter(hi, lo))


def _score(hist) -> float:
    try:
        return nmi(hist)
    except DegenerateScoreError:
        return DEGENERATE_SCORE


def run_trial(rng, cfg: SimConfig, n0: float, grid: TileGrid, *, sigmas=None, decoy_is_truth: bool = False):
    """One capture-vs-two-candidates trial; returns ``(nmi_error, enmi_error)``.

    ``decoy_is_truth`` replaces the decoy by the true section (test hook).
    """
    m = grid.count
    if sigmas is None:
        sigmas = tile_sigmas(grid, NoiseSpec(n0))
    a = draw_image(rng, m, cfg.amplitude_mean, cfg.amplitude_std)
    u = draw_image(rng, m, cfg.amplitude_mean, cfg.amplitude_std)
    if decoy_is_truth:
        u = a
    v = a + sigmas * rng.standard_normal(m)

    b = cfg.binning
    nmi_err = _score(joint_standard(v, u, b)) >= _score(joint_standard(v, a, b))
    post = bin_posteriors(v, sigmas, b, cfg.prior)
    enmi_err = _score(joint_from_posterior(post, b.index(u))) >= _score(joint_from_posterior(post, b.index(a)))
    return bool(nmi_err), bool(enmi_err)


def _run_chunk(args):
    cfg, n0_index, start, stop = args
    grid = cfg.grid()
    n0 = cfg.n0_values[n0_index]
    sigmas = tile_sigmas(grid, NoiseSpec(n0))
    nmi_errors = enmi_errors = 0
    for t in range(start, stop):
        e1, e2 = run_trial(trial_rng(cfg.seed, n0_index, t), cfg, n0, grid, sigmas=sigmas)
        nmi_errors += e1
        enmi_errors += e2
    return n0_index, nmi_errors, enmi_errors


def _chunks(cfg: SimConfig, workers: int):
    per = max(1, math.ceil(cfg.trials / max(1, workers)))
    for i in range(len(cfg.n0_values)):
        for start in range(0, cfg.trials, per):
            yield cfg, i, start, min(cfg.trials, start + per)


def sweep(cfg: SimConfig, workers: int = 1) -> SweepResult:
    nmi_counts = [0] * len(cfg.n0_values)
    enmi_counts = [0] * len(cfg.n0_values)
    jobs = list(_chunks(cfg, workers))
    if workers <= 1:
        results = map(_run_chunk, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_run_chunk, jobs)
    try:
        for i, e1, e2 in results:
            nmi_counts[i] += e1
            enmi_counts[i] += e2
    finally:
        if workers > 1:
            pool.shutdown()
    rows = tuple(
        SweepRow(n0, cfg.trials, nmi_counts[i], enmi_counts[i]) for i, n0 in enumerate(cfg.n0_values)
    )
    return SweepResult(rows)


def emit_curves(result: SweepResult, csv_path, svg_path=None) -> None:
    """Write the sweep table as CSV and, optionally, a log-x error-probability plot as SVG."""
    if not result.rows:
        raise ValueError("empty sweep result")
    with atomic_write(csv_path, newline="") as fh:
        fh.write(result.to_csv())
    if svg_path is not None:
        _write_svg(result, svg_path)


def _write_svg(result: SweepResult, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n0 = [r.n0 for r in result.rows]
    with matplotlib.rc_context({"svg.hashsalt": "enmi-loc", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.5, 4.75))
        ax.plot(n0, [r.nmi_error_rate for r in result.rows], "b--", lw=1.5, label="NMI")
        ax.plot(n0, [r.enmi_error_rate for r in result.rows], "k-", lw=1.5, label="ENMI")
        ax.set_xscale("log")
        ax.set_ylim(-0.05, 0.6)
        ax.set_xlabel("Power Spectral Density, $N_0$")
        ax.set_ylabel("Probability of Error")
        ax.grid(True)
        ax.legend(loc="upper left")
        fig.tight_layout()
        with atomic_write(Path(path), "wb") as fh:
            fig.savefig(fh, format="svg", metadata={"Date": None})
        plt.close(fig)
