"""Run every verification preset (or a chosen subset) and print one line each."""
import argparse
import sys
import time
from pathlib import Path

from conslaw.cli import run_preset
from conslaw.experiments import list_presets


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="preset names (default: all)")
    ap.add_argument("--out", default="out/presets")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    names = args.names or [p.name for p in list_presets()]
    failed = 0
    for name in names:
        t0 = time.perf_counter()
        s = run_preset(name, Path(args.out) / name, args.seed)
        failed += not s["passed"]
        print(f"{'PASS' if s['passed'] else 'FAIL'} {name:22s} {time.perf_counter() - t0:6.1f}s  {s['detail']}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
