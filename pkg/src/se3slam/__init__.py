"""Geometric SLAM observer on SE(3) with a desk-scale simulation harness."""

__version__ = "0.1.0"
