"""SO(3)/SE(3) primitives: hat/vee maps, exponentials, and rotation utilities.

Conventions:
    * hat(v) is the skew-symmetric matrix of the right-handed cross product,
      hat(v) @ w == cross(v, w).
    * A ``Pose`` stores ``dcm`` mapping datum-frame coordinates to body-frame
      coordinates, plus the body origin ``position`` resolved in the datum
      frame. The equivalent 4x4 homogeneous matrix carries ``dcm.T`` in its
      rotation block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrix, NotSkewSymmetric

# Below this rotation magnitude the trig coefficients switch to their series
# expansions to avoid 0/0.
SMALL_ANGLE = 1e-8
SKEW_TOL = 1e-9
ROTATION_TOL = 1e-9

_I3 = np.eye(3)


def hat(v) -> np.ndarray:
    """Skew-symmetric matrix S with S @ w == cross(v, w)."""
    x, y, z = np.asarray(v, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m) -> np.ndarray:
    """Inverse of hat. Raises NotSkewSymmetric if m + m.T exceeds tolerance."""
    m = np.asarray(m, dtype=float)
    if np.linalg.norm(m + m.T) > SKEW_TOL:
        raise NotSkewSymmetric(f"matrix is not skew-symmetric within {SKEW_TOL}")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def _rodrigues_coefficients(theta: float) -> tuple[float, float]:
    if theta < SMALL_ANGLE:
        return 1.0 - theta**2 / 6.0, 0.5 - theta**2 / 24.0
    return np.sin(theta) / theta, (1.0 - np.cos(theta)) / theta**2


def exp_so3(axis_angle) -> np.ndarray:
    """Rodrigues rotation matrix for the axis-angle vector."""
    v = np.asarray(axis_angle, dtype=float)
    theta = float(np.linalg.norm(v))
    k = hat(v)
    a, b = _rodrigues_coefficients(theta)
    return _I3 + a * k + b * (k @ k)


def _left_jacobian_so3(axis_angle) -> np.ndarray:
    v = np.asarray(axis_angle, dtype=float)
    theta = float(np.linalg.norm(v))
    k = hat(v)
    if theta < SMALL_ANGLE:
        b, c = 0.5 - theta**2 / 24.0, 1.0 / 6.0 - theta**2 / 120.0
    else:
        b = (1.0 - np.cos(theta)) / theta**2
        c = (theta - np.sin(theta)) / theta**3
    return _I3 + b * k + c * (k @ k)


def right_jacobian_so3(axis_angle) -> np.ndarray:
    """Right Jacobian of SO(3): d/dt exp(hat(a)) = exp(hat(a)) hat(Jr(a) da/dt)."""
    return _left_jacobian_so3(np.negative(np.asarray(axis_angle, dtype=float)))


def is_rotation(m, tol: float = ROTATION_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    if np.linalg.norm(m.T @ m - _I3) > tol:
        return False
    return abs(np.linalg.det(m) - 1.0) <= tol


def check_rotation(m, tol: float = ROTATION_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if not is_rotation(m, tol):
        raise ValueError("matrix violates rotation invariants (orthonormality / det)")
    return m


def reorthonormalize(m) -> np.ndarray:
    """Nearest rotation matrix (polar projection). Idempotent on exact rotations."""
    m = np.asarray(m, dtype=float)
    u, s, vt = np.linalg.svd(m)
    if np.linalg.det(m) <= 0.0 or s[-1] < 1e-12:
        raise DegenerateMatrix("input is singular or has non-positive determinant")
    return u @ vt


def rotation_angle(r) -> float:
    """Rotation angle in [0, pi] from the trace, clamped for numerical safety."""
    r = np.asarray(r, dtype=float)
    return float(np.arccos(np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)))


@dataclass(frozen=True)
class Pose:
    """SE(3) element: datum->body rotation plus body position in the datum frame."""

    dcm: np.ndarray
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dcm", check_rotation(self.dcm))
        p = np.asarray(self.position, dtype=float)
        if p.shape != (3,) or not np.all(np.isfinite(p)):
            raise ValueError("position must be a finite 3-vector")
        object.__setattr__(self, "position", p)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(_I3.copy(), np.zeros(3))

    @classmethod
    def from_matrix(cls, m) -> "Pose":
        m = np.asarray(m, dtype=float)
        return cls(m[:3, :3].T, m[:3, 3])

    @property
    def matrix(self) -> np.ndarray:
        out = np.eye(4)
        out[:3, :3] = self.dcm.T
        out[:3, 3] = self.position
        return out

    def compose(self, other: "Pose") -> "Pose":
        """Homogeneous-matrix product self.matrix @ other.matrix."""
        return Pose(
            other.dcm @ self.dcm,
            self.dcm.T @ other.position + self.position,
        )

    def inverse(self) -> "Pose":
        return Pose(self.dcm.T, -(self.dcm @ self.position))

    def __matmul__(self, other: "Pose") -> "Pose":
        return self.compose(other)


def exp_se3(omega, v) -> Pose:
    """Matrix exponential of the twist [[hat(omega), v], [0, 0]] as a Pose.

    The rotation block equals exp_so3(omega); the translation block is the
    SO(3) left Jacobian applied to v.
    """
    r = exp_so3(omega)
    t = _left_jacobian_so3(omega) @ np.asarray(v, dtype=float)
    return Pose(r.T, t)
