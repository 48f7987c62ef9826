"""Integrator, one-period propagator, cyclic states, and root tracking."""
from __future__ import annotations

import numpy as np
import pytest

from nhfloquet.errors import (
    BranchAmbiguity,
    DegenerateMatrix,
    LiouvilleViolation,
    StateOverflow,
)
from nhfloquet.models import Model1Params, h1
from nhfloquet.numerics import (
    DEFAULT_STEPS,
    classify_stability,
    cyclic_states,
    eig2,
    floquet_operator,
    propagate,
    track_root,
    StabilityKind,
)

TWO_PI = 2.0 * np.pi


def _h1(params):
    return lambda t: h1(params, t)


def test_trajectory_grid_and_dtype():
    p = Model1Params(epsilon=0.2 + 0.0j, omega=1.0)
    traj = propagate(_h1(p), np.array([1.0, 0.0]), p.period, 64)
    assert traj.times.shape == (65,)
    assert traj.states.shape == (65, 2)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(p.period)
    assert traj.states.dtype == np.complex128
    assert traj.steps == 64


def test_extended_precision_dtype():
    p = Model1Params(epsilon=0.2 + 0.0j, omega=1.0)
    traj = propagate(_h1(p), np.array([1.0, 0.0]), p.period, 32, precision="extended")
    assert traj.states.dtype == np.clongdouble


def test_hermitian_drive_preserves_norm():
    p = Model1Params(epsilon=0.7 + 0.0j, omega=1.3)
    traj = propagate(_h1(p), np.array([0.6, 0.8]), p.period, 1 << 10)
    norms = np.linalg.norm(traj.states, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-9


def test_default_steps_value():
    assert DEFAULT_STEPS == 1 << 14


def test_floquet_operator_columns_are_basis_solutions():
    p = Model1Params(epsilon=0.4 + 0.2j, omega=0.9)
    U = floquet_operator(_h1(p), p.period, 1 << 9)
    for col, start in ((0, [1.0, 0.0]), (1, [0.0, 1.0])):
        final = propagate(_h1(p), np.array(start), p.period, 1 << 9).states[-1]
        assert np.linalg.norm(U[:, col] - final) < 1e-10


def test_floquet_operator_rejects_bad_liouville_tolerance():
    p = Model1Params(epsilon=0.4 + 0.2j, omega=0.9)
    with pytest.raises(LiouvilleViolation):
        floquet_operator(_h1(p), p.period, 1 << 9, liouville_tol=1e-18)


def test_cyclic_state_labels_and_residuals():
    U = np.array([[2.0j, 0.0], [0.0, 0.5]], dtype=complex)
    plus, minus = cyclic_states(U)
    # multipliers 2i and 0.5 give alpha = pi/2 - i ln 2 and +i ln 2
    assert plus.alpha.real == pytest.approx(np.pi / 2)
    assert plus.alpha.imag == pytest.approx(-np.log(2.0))
    assert minus.alpha.real == pytest.approx(0.0)
    assert minus.alpha.imag == pytest.approx(np.log(2.0))
    assert plus.label == "+" and minus.label == "-"
    assert plus.residual < 1e-12 and minus.residual < 1e-12
    assert abs(plus.multiplier - 2.0j) < 1e-12
    assert np.linalg.norm(plus.u) == pytest.approx(1.0)


def test_stability_classification():
    hermitian = Model1Params(epsilon=0.3 + 0.0j, omega=1.0)
    U = floquet_operator(_h1(hermitian), hermitian.period, 1 << 9)
    assert classify_stability(U).kind is StabilityKind.STABLE
    grow = classify_stability(np.diag([2.0 + 0.0j, 0.5 + 0.0j]))
    assert grow.kind is StabilityKind.UNSTABLE
    assert sorted(grow.moduli) == pytest.approx([0.5, 2.0])
    defective = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    assert classify_stability(defective).kind is StabilityKind.MARGINAL


def test_propagate_overflow_guard():
    H = lambda t: np.array([[-5.0j, 0.0], [0.0, 5.0j]], dtype=complex)
    with pytest.raises(StateOverflow):
        propagate(H, np.array([1.0, 1.0]), 10.0, 1 << 10)


def test_eig2_pairs_and_defective_raise():
    (l1, v1), (l2, v2) = eig2(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
    assert sorted([l1.real, l2.real]) == pytest.approx([-1.0, 1.0])
    for lam, v in ((l1, v1), (l2, v2)):
        assert np.linalg.norm(np.array([[0, 1], [1, 0]]) @ v - lam * v) < 1e-12
    with pytest.raises(DegenerateMatrix):
        eig2(np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))


def test_track_root_follows_the_path_across_the_cut():
    thetas = np.linspace(0.0, TWO_PI, 601)
    values = np.exp(1j * thetas)
    sq = track_root(values, 2)
    assert np.max(np.abs(np.diff(sq))) < 0.02
    assert sq[-1] == pytest.approx(-1.0)
    fourth = track_root(values, 4)
    assert fourth[-1] == pytest.approx(np.exp(0.5j * np.pi))


def test_track_root_refuses_coarse_winding():
    with pytest.raises(BranchAmbiguity):
        track_root(np.array([1.0, -1.0, 1.0], dtype=complex), 2)
