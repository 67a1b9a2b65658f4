#!/usr/bin/env python3
"""Sweep one gain of the noise-free scenario and print final errors per value.

Usage: gain_sweep.py [param] [comma-separated values] [out_dir]
Defaults: gains.k3 over 1,2,4,8,12,16.
"""

import sys
from pathlib import Path

from se3slam.cli import main


def sweep(param="gains.k3", values="1,2,4,8,12,16", out_dir="out/sweep"):
    scenario = Path(__file__).resolve().parent.parent / "scenarios" / "fig3_noisefree.yaml"
    return main(
        ["sweep", str(scenario), "--param", param, "--values", values,
         "--out", out_dir, "--decimate", "10"]
    )


if __name__ == "__main__":
    sys.exit(sweep(*sys.argv[1:]))
