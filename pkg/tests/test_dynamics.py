import numpy as np
import pytest

from ptsmc.helper.control_utils.dynamics import (
    AttitudeReference,
    AttitudeState,
    Quaternion,
    RigidBody,
    dynamics_rate,
    kinematics_rate,
    skew,
    t_matrix,
    tracking_errors,
)
from ptsmc.helper.ext_utils.exceptions import DomainError

SQ2, SQ3 = np.sqrt(2.0), np.sqrt(3.0)
Q0 = Quaternion(np.array([SQ2 / 3, -1 / 3, SQ3 / 3]), SQ3 / 3)
BODY = RigidBody.diagonal(10.0, 12.0, 14.0)


def random_unit_quaternions(count, seed=0):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(count, 4))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    return [Quaternion.from_array(q) for q in raw]


def test_quaternion_rejects_non_unit_norm():
    with pytest.raises(DomainError):
        Quaternion(np.array([1.0, 1.0, 0.0]), 0.0)
    q = Quaternion.from_array([1.0, 1.0, 0.0, 0.0], check=False)
    np.testing.assert_allclose(q.normalized().norm(), 1.0)


def test_rigid_body_validation():
    with pytest.raises(DomainError):
        RigidBody(np.array([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    with pytest.raises(DomainError):
        RigidBody.diagonal(1.0, -1.0, 1.0)
    np.testing.assert_allclose(BODY.inertia_inv, np.diag([0.1, 1 / 12, 1 / 14]))


def test_t_matrix_identity_and_initial_attitude():
    np.testing.assert_allclose(t_matrix(Quaternion.identity()), np.eye(3))
    expected = np.array(
        [
            [SQ3 / 3, -SQ3 / 3, -1 / 3],
            [SQ3 / 3, SQ3 / 3, -SQ2 / 3],
            [1 / 3, SQ2 / 3, SQ3 / 3],
        ]
    )
    np.testing.assert_allclose(t_matrix(Q0), expected, atol=1e-15)


def test_t_matrix_determinant_is_scalar_part():
    for q in random_unit_quaternions(200):
        assert abs(np.linalg.det(t_matrix(q)) - q.s) <= 1e-12


def test_t_matrix_singular_when_scalar_part_zero():
    q = Quaternion(np.array([0.6, 0.0, 0.8]), 0.0)
    assert abs(np.linalg.det(t_matrix(q))) <= 1e-15


def test_kinematics_rate_examples():
    v_dot, s_dot = kinematics_rate(Q0, np.zeros(3))
    np.testing.assert_array_equal(v_dot, np.zeros(3))
    assert s_dot == 0.0

    v_dot, s_dot = kinematics_rate(Quaternion.identity(), np.array([0.2, -0.4, 0.6]))
    np.testing.assert_allclose(v_dot, [0.1, -0.2, 0.3])
    assert s_dot == 0.0

    v_dot, s_dot = kinematics_rate(Q0, np.array([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(v_dot, [SQ3 / 6, SQ3 / 6, 1 / 6])
    np.testing.assert_allclose(s_dot, -SQ2 / 6)


def test_kinematics_rate_preserves_norm():
    rng = np.random.default_rng(1)
    for q in random_unit_quaternions(100, seed=2):
        v_dot, s_dot = kinematics_rate(q, rng.normal(size=3))
        assert abs(q.v @ v_dot + q.s * s_dot) <= 1e-14


def test_dynamics_rate_examples():
    np.testing.assert_allclose(
        dynamics_rate(BODY, np.array([0.7, 0.0, 0.0]), np.zeros(3), np.zeros(3)), np.zeros(3)
    )
    np.testing.assert_allclose(
        dynamics_rate(BODY, np.zeros(3), np.array([1.0, 0.0, 0.0]), np.zeros(3)), [0.1, 0.0, 0.0]
    )
    np.testing.assert_allclose(
        dynamics_rate(BODY, np.array([1.0, 1.0, 0.0]), np.zeros(3), np.zeros(3)),
        [0.0, 0.0, -2 / 14],
        atol=1e-15,
    )


def test_dynamics_rate_torque_disturbance_swap():
    rng = np.random.default_rng(3)
    w, torque, d = rng.normal(size=(3, 3))
    np.testing.assert_allclose(
        dynamics_rate(BODY, w, torque, d), dynamics_rate(BODY, w, torque + d, np.zeros(3))
    )


def test_skew_is_cross_product():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=(2, 3))
    np.testing.assert_allclose(skew(a) @ b, np.cross(a, b))


def test_tracking_errors_initial_attitude():
    state = AttitudeState(Q0, np.zeros(3))
    eps1, eps4, eps1_dot = tracking_errors(state, AttitudeReference.constant(), 0.0)
    np.testing.assert_allclose(eps1, [SQ2 / 3, -1 / 3, SQ3 / 3])
    np.testing.assert_allclose(eps4, SQ3 / 3 - 1)
    np.testing.assert_array_equal(eps1_dot, np.zeros(3))

    w = np.array([0.1, -0.2, 0.3])
    _, _, eps1_dot = tracking_errors(AttitudeState(Q0, w), AttitudeReference.constant(), 0.0)
    np.testing.assert_allclose(eps1_dot, 0.5 * t_matrix(Q0) @ w)


def test_spin_reference_is_consistent():
    ref = AttitudeReference.spin((0.0, 0.0, 1.0), 0.3)
    h = 1e-5
    for t in (0.0, 1.3, 7.9):
        assert ref.is_unit(t)
        np.testing.assert_allclose(
            ref.q1f_dot(t), (ref.q1f(t + h) - ref.q1f(t - h)) / (2 * h), atol=1e-9
        )
        np.testing.assert_allclose(
            ref.q1f_ddot(t), (ref.q1f_dot(t + h) - ref.q1f_dot(t - h)) / (2 * h), atol=1e-9
        )
    # the reference is itself a solution of the kinematics with w = rate about z
    t = 2.0
    state = AttitudeState(ref.quaternion(t), np.array([0.0, 0.0, 0.3]))
    eps1, eps4, eps1_dot = tracking_errors(state, ref, t)
    np.testing.assert_allclose(eps1, np.zeros(3), atol=1e-15)
    assert eps4 == 0.0
    np.testing.assert_allclose(eps1_dot, np.zeros(3), atol=1e-15)
