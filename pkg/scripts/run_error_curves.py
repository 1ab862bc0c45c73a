"""Full NMI vs ENMI error-probability sweep (10k trials per N0 by default)."""
import argparse
import time
from pathlib import Path

from enmi_loc.montecarlo import SimConfig, emit_curves, sweep

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", type=Path, default=ROOT / "configs" / "reference_sim.json")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=ROOT / "results")
    args = ap.parse_args()

    cfg = SimConfig.load(args.config)
    if args.trials:
        cfg = cfg.replace(trials=args.trials)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    result = sweep(cfg, workers=args.workers)
    emit_curves(result, args.out_dir / "error_curves.csv", args.out_dir / "error_curves.svg")
    for r in result.rows:
        print(f"n0={r.n0:<8g} nmi={r.nmi_error_rate:.4f} enmi={r.enmi_error_rate:.4f}")
    print(f"{len(result.rows)} points x {cfg.trials} trials in {time.perf_counter() - t0:.0f}s -> {args.out_dir}")


if __name__ == "__main__":
    main()
