"""Command-line entry point: ``enmi-loc {project,match,simulate,mask}``.

Exit status is 0 on success, 1 on a runtime failure (one-line diagnostic on
stderr) and 2 on a usage error. Output files are written atomically.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import reference
from ._io import atomic_write
from .binning import BinningScheme
from .geometry import CameraConfig
from .grid import DEFAULT_FOV_SLACK_DEG, VISIBILITY_MODES, build_grid, tile_sigmas
from .matcher import CandidateSection, Mode, best_match
from .montecarlo import SimConfig, emit_curves, sweep
from .noise import NoiseSpec
from .pgm import write_pgm
from .variance_mask import mask_from_manifest, mask_preview, write_mask_csv

PROG = "enmi-loc"
WORKERS_ENV = "ENMI_LOC_WORKERS"
VECTOR_SUFFIXES = (".json", ".csv", ".txt")


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="ENMI map-matching localization toolkit.",
        epilog=f"Worker count for 'simulate' may also be set through ${WORKERS_ENV}.",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="{project,match,simulate,mask}", required=True)

    p = sub.add_parser("project", help="tessellate the visible road; print per-tile area and sigma as CSV")
    p.add_argument("--camera", type=Path, help="camera JSON (default: reference parameters)")
    p.add_argument("--side", type=_positive_float, default=reference.REFERENCE_SIDE_CM, help="tile side in cm")
    p.add_argument("--n0", type=_positive_float, default=0.01, help="noise PSD used for the sigma column")
    p.add_argument("--fov-slack-deg", type=float, default=DEFAULT_FOV_SLACK_DEG)
    p.add_argument("--visibility", choices=VISIBILITY_MODES, default="angular")
    p.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    p.add_argument("--grid-json", type=Path, help="also write the grid as JSON")

    m = sub.add_parser("match", help="score a capture against candidate map sections")
    m.add_argument("--capture", type=Path, required=True, help="amplitude vector file (.json list or CSV/text)")
    m.add_argument("--candidates", type=Path, required=True, help="directory of vector files or a CSV manifest (id,path)")
    m.add_argument("--mode", choices=[x.value for x in Mode], default="enmi")
    m.add_argument("--camera", type=Path, help="camera JSON (default: reference parameters)")
    m.add_argument("--n0", type=_positive_float, default=0.01)
    m.add_argument("--bins", type=_positive_int, default=32)
    m.add_argument("--side", type=_positive_float, default=reference.REFERENCE_SIDE_CM)

    s = sub.add_parser("simulate", help="Monte Carlo NMI vs ENMI error-probability sweep")
    s.add_argument("--config", type=Path, required=True, help="simulation JSON")
    s.add_argument("--out", type=Path, required=True, help="results CSV")
    s.add_argument("--svg", type=Path, help="error-probability plot")
    s.add_argument("--trials", type=_positive_int, help="override trials per N0")
    s.add_argument("--seed", type=int, help="override seed")
    s.add_argument("--bins", type=_positive_int, help="override bin count (uniform over [0, 256))")
    s.add_argument("--workers", type=_positive_int, help=f"worker processes (default ${WORKERS_ENV} or 1)")

    k = sub.add_parser("mask", help="per-pixel variance mask from aligned image pairs")
    k.add_argument("--pairs", type=Path, required=True, help="manifest CSV with local_path,prior_path")
    k.add_argument("--out", type=Path, required=True, help="mask CSV (i, j, variance)")
    k.add_argument("--preview", type=Path, help="min-max scaled PGM preview")
    k.add_argument("--valid", type=Path, help="PGM validity mask (nonzero = valid)")
    return parser


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    cmd = args.subcommand

    def need_file(path, flag):
        if path is not None and not path.exists():
            parser.error(f"{flag}: no such file or directory: {path}")

    def need_dir(path, flag):
        if path is not None and not path.resolve().parent.is_dir():
            parser.error(f"{flag}: output directory does not exist: {path.parent}")

    if cmd == "project":
        need_file(args.camera, "--camera")
        need_dir(args.out, "--out")
        need_dir(args.grid_json, "--grid-json")
        if args.out is not None and args.out == args.grid_json:
            parser.error("--out and --grid-json must differ")
    elif cmd == "match":
        need_file(args.capture, "--capture")
        need_file(args.candidates, "--candidates")
        need_file(args.camera, "--camera")
    elif cmd == "simulate":
        need_file(args.config, "--config")
        need_dir(args.out, "--out")
        need_dir(args.svg, "--svg")
        if args.svg is not None and args.svg == args.out:
            parser.error("--out and --svg must differ")
        if args.workers is None:
            env = os.environ.get(WORKERS_ENV)
            try:
                args.workers = _positive_int(env) if env else 1
            except (ValueError, argparse.ArgumentTypeError):
                parser.error(f"${WORKERS_ENV} must be an integer >= 1, got {env!r}")
    elif cmd == "mask":
        need_file(args.pairs, "--pairs")
        need_file(args.valid, "--valid")
        need_dir(args.out, "--out")
        need_dir(args.preview, "--preview")
        if args.preview is not None and args.preview == args.out:
            parser.error("--out and --preview must differ")
    return RunConfig(cmd, args)


def _camera(path) -> CameraConfig:
    if path is None:
        return CameraConfig.from_json_dict(reference.REFERENCE_CAMERA)
    with open(path) as fh:
        return CameraConfig.from_json_dict(json.load(fh))


def load_vector(path) -> np.ndarray:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        values = json.loads(text)
        if isinstance(values, dict):
            values = values["values"]
    else:
        values = [float(t) for t in text.replace(",", " ").split()]
    return np.asarray(values, dtype=float)


def load_candidates(path) -> list[CandidateSection]:
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in VECTOR_SUFFIXES)
        return [CandidateSection(p.stem, load_vector(p)) for p in files]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not {"id", "path"} <= set(reader.fieldnames or ()):
            raise ValueError("candidate manifest needs 'id' and 'path' columns")
        out = []
        for rec in reader:
            meta = {k: v for k, v in rec.items() if k not in ("id", "path")}
            out.append(CandidateSection(rec["id"], load_vector(path.parent / rec["path"]), meta))
    return out


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with atomic_write(path, newline="") as fh:
            fh.write(text)


def _run_project(a) -> None:
    grid = build_grid(_camera(a.camera), a.side, fov_slack_deg=a.fov_slack_deg, visibility=a.visibility)
    sig = tile_sigmas(grid, NoiseSpec(a.n0))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "col", "x_l", "x_u", "z_l", "z_u", "area_cm2", "sigma"])
    for t, s in zip(grid.tiles, sig):
        r = t.region
        w.writerow([t.row, t.col, repr(r.x_lower), repr(r.x_upper), repr(r.z_lower), repr(r.z_upper), repr(t.area), repr(float(s))])
    if a.grid_json is not None:
        with atomic_write(a.grid_json) as fh:
            json.dump(grid.to_json_dict(), fh, indent=1)
    _emit(buf.getvalue(), a.out)


def _run_match(a) -> None:
    grid = build_grid(_camera(a.camera), a.side)
    candidates = load_candidates(a.candidates)
    result = best_match(
        load_vector(a.capture), candidates, a.mode, grid, NoiseSpec(a.n0), BinningScheme.uniform(a.bins)
    )
    buf = io.StringIO()
    buf.write(f"best_id={result.best_id}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "score"])
    for c, score in zip(candidates, result.scores):
        w.writerow([c.id, repr(float(score))])
    sys.stdout.write(buf.getvalue())


def _run_simulate(a) -> None:
    cfg = SimConfig.load(a.config)
    overrides = {}
    if a.trials is not None:
        overrides["trials"] = a.trials
    if a.seed is not None:
        overrides["seed"] = a.seed
    if a.bins is not None:
        overrides["binning"] = BinningScheme.uniform(a.bins)
    cfg = cfg.replace(**overrides)
    result = sweep(cfg, workers=a.workers)
    emit_curves(result, a.out, a.svg)


def _run_mask(a) -> None:
    mask = mask_from_manifest(a.pairs, a.valid)
    write_mask_csv(mask, a.out)
    if a.preview is not None:
        write_pgm(a.preview, mask_preview(mask))


_DISPATCH = {"project": _run_project, "match": _run_match, "simulate": _run_simulate, "mask": _run_mask}


def run(config: RunConfig) -> int:
    try:
        _DISPATCH[config.subcommand](config.args)
    except (ValueError, OSError, KeyError, ArithmeticError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"{PROG}: error: {msg}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
