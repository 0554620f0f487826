#!/usr/bin/env python3
"""Reproduce the common-equilibrium benchmark: stability reports at a large
and a vanishing dwell scale, plus trajectories from the unit circle.

Usage: python scripts/run_example1.py [OUT_DIR]
"""

import sys
from pathlib import Path

from swstab.cli import main as swstab_main


def run(out_dir: str) -> int:
    status = 0
    for eta, sub in ((1.1, "eta_1.1"), (1e-3, "eta_0.001")):
        code = swstab_main([
            "example", "1", "--eta", str(eta), "--t-end", "60",
            "--dt", "0.05", "--circle", "8",
            "--out", str(Path(out_dir) / sub)])
        print(f"eta = {eta}: exit {code}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    raise SystemExit(run(sys.argv[1] if len(sys.argv) > 1 else "out/example1"))
