import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_rotation
from se3slam.errors import DegenerateMatrix, NotSkewSymmetric
from se3slam.liegroup import (
    Pose,
    exp_se3,
    exp_so3,
    hat,
    is_rotation,
    reorthonormalize,
    right_jacobian_so3,
    rotation_angle,
    vee,
)

finite_component = st.floats(-1e3, 1e3, allow_nan=False)
vec3 = st.tuples(finite_component, finite_component, finite_component).map(np.array)


def test_hat_zero():
    assert np.array_equal(hat([0, 0, 0]), np.zeros((3, 3)))


def test_hat_canonical_basis():
    expected = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float)
    assert np.array_equal(hat([1, 0, 0]), expected)


def test_hat_matches_cross_product():
    v, w = np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0])
    # oracle: componentwise cross product
    assert np.allclose(hat(v) @ w, [-3.0, 6.0, -3.0])
    assert np.array_equal(hat(v) @ w, np.cross(v, w))


@given(vec3)
def test_vee_hat_roundtrip_exact(v):
    assert np.array_equal(vee(hat(v)), v)


@given(vec3, vec3)
def test_hat_antisymmetry(v, w):
    assert np.allclose(hat(v) @ w, -(hat(w) @ v))


def test_vee_zero():
    assert np.array_equal(vee(np.zeros((3, 3))), np.zeros(3))


def test_vee_rejects_symmetric():
    with pytest.raises(NotSkewSymmetric):
        vee(np.eye(3))


def test_exp_so3_identity():
    assert np.array_equal(exp_so3([0, 0, 0]), np.eye(3))


def test_exp_so3_quarter_turn_about_z():
    # oracle: closed-form z-axis rotation matrix
    r = exp_so3([0, 0, np.pi / 2])
    assert np.allclose(r @ np.array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-12)
    closed_form = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(r, closed_form, atol=1e-12)


@given(vec3)
def test_exp_so3_inverse_symmetry(v):
    v = v / max(1.0, np.linalg.norm(v) / 3.0)
    assert np.allclose(exp_so3(v) @ exp_so3(-v), np.eye(3), atol=1e-12)


@given(vec3.filter(lambda v: np.linalg.norm(v) <= 10.0))
def test_exp_so3_is_rotation(v):
    assert is_rotation(exp_so3(v))


def test_exp_so3_small_angle_branch():
    v = np.array([3e-9, -2e-9, 1e-9])
    r = exp_so3(v)
    assert is_rotation(r)
    assert np.allclose(vee(0.5 * (r - r.T)), v, rtol=1e-6)


def test_exp_se3_identity():
    p = exp_se3([0, 0, 0], [0, 0, 0])
    assert np.array_equal(p.matrix, np.eye(4))


def test_exp_se3_pure_translation():
    p = exp_se3([0, 0, 0], [1, 2, 3])
    assert np.array_equal(p.dcm, np.eye(3))
    assert np.array_equal(p.position, [1.0, 2.0, 3.0])


def _expm_oracle(omega, v):
    twist = np.zeros((4, 4))
    twist[:3, :3] = hat(omega)
    twist[:3, 3] = v
    return scipy.linalg.expm(twist)


def test_exp_se3_half_turn_value():
    # oracle: dense matrix exponential of the twist
    p = exp_se3([0, 0, np.pi], [1, 0, 0])
    assert np.allclose(p.matrix, _expm_oracle([0, 0, np.pi], [1, 0, 0]), atol=1e-12)
    assert np.allclose(p.position, [0.0, 2.0 / np.pi, 0.0], atol=1e-12)


def test_exp_se3_matches_dense_exponential(rng):
    for _ in range(100):
        omega = rng.normal(size=3) * rng.uniform(0.0, 3.0)
        v = rng.normal(size=3) * 2.0
        assert np.allclose(exp_se3(omega, v).matrix, _expm_oracle(omega, v), atol=1e-10)


def test_reorthonormalize_idempotent_on_rotations(rng):
    r = random_rotation(rng)
    assert np.allclose(reorthonormalize(r), r, atol=1e-14)


def test_reorthonormalize_small_perturbation(rng):
    r = np.eye(3) + 1e-6 * rng.normal(size=(3, 3))
    out = reorthonormalize(r)
    # oracle: SVD projection U @ Vt
    u, _, vt = np.linalg.svd(r)
    assert np.allclose(out, u @ vt, atol=1e-15)
    assert np.linalg.norm(out.T @ out - np.eye(3)) < 1e-12
    assert np.linalg.norm(out - r) < 1e-5


def test_reorthonormalize_projection_property(rng):
    r = random_rotation(rng) + 1e-3 * rng.normal(size=(3, 3))
    once = reorthonormalize(r)
    assert np.allclose(reorthonormalize(once), once, atol=1e-14)


def test_reorthonormalize_rejects_degenerate():
    with pytest.raises(DegenerateMatrix):
        reorthonormalize(np.zeros((3, 3)))
    with pytest.raises(DegenerateMatrix):
        reorthonormalize(np.diag([1.0, 1.0, -1.0]))


def test_rotation_angle_identity():
    assert rotation_angle(np.eye(3)) == 0.0


def test_rotation_angle_quarter_turn():
    assert abs(rotation_angle(exp_so3([0, 0, np.pi / 2])) - np.pi / 2) < 1e-12


def test_rotation_angle_unsigned():
    assert abs(rotation_angle(exp_so3([0, 0, -0.3])) - 0.3) < 1e-12


@given(st.floats(1e-6, np.pi - 1e-6), vec3.filter(lambda v: np.linalg.norm(v) > 1e-3))
@settings(max_examples=50)
def test_rotation_angle_roundtrip(theta, axis):
    axis = axis / np.linalg.norm(axis)
    assert abs(rotation_angle(exp_so3(theta * axis)) - theta) < 1e-9


def test_right_jacobian_finite_difference(rng):
    # oracle: central difference of exp_so3 along a tangent direction
    a = rng.normal(size=3)
    da = rng.normal(size=3)
    h = 1e-6
    num = (exp_so3(a + h * da) - exp_so3(a - h * da)) / (2 * h)
    ana = exp_so3(a) @ hat(right_jacobian_so3(a) @ da)
    assert np.allclose(num, ana, atol=1e-8)


def test_pose_compose_matches_matrix_product(rng):
    a = Pose(random_rotation(rng), rng.normal(size=3))
    b = Pose(random_rotation(rng), rng.normal(size=3))
    assert np.allclose(a.compose(b).matrix, a.matrix @ b.matrix, atol=1e-14)


def test_pose_inverse(rng):
    a = Pose(random_rotation(rng), rng.normal(size=3))
    assert np.allclose(a.compose(a.inverse()).matrix, np.eye(4), atol=1e-13)
    assert np.allclose(a.inverse().matrix, np.linalg.inv(a.matrix), atol=1e-12)


def test_pose_rejects_bad_rotation():
    with pytest.raises(ValueError):
        Pose(np.eye(3) * 1.01, np.zeros(3))
    with pytest.raises(ValueError):
        Pose(np.eye(3), np.array([np.nan, 0.0, 0.0]))
