#!/usr/bin/env python3
"""Run every bundled scenario and write CSV + summary files under out/."""

import sys
from pathlib import Path

from se3slam.cli import main

SCENARIOS = ["fig3_noisefree", "fig3_noisy", "reconstructed", "heavytail"]


def run_all(out_dir="out"):
    root = Path(__file__).resolve().parent.parent / "scenarios"
    for name in SCENARIOS:
        print(f"=== {name} ===")
        code = main(["run", str(root / f"{name}.yaml"), "--out", out_dir, "--decimate", "10"])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run_all(*sys.argv[1:]))
