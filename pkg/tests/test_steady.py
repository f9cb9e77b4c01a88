import math

import numpy as np
import pytest

from colltherm.linalg import kron, partial_trace_mat, validate_state
from colltherm.model import (
    EXCITED,
    GROUND,
    PLUS,
    ModelParams,
    partial_swap_unitary,
    thermal_map_factors,
    thermal_map_mat,
    thermal_qubit_state,
)
from colltherm.steady import (
    DegenerateFixedPoint,
    Superoperator,
    build_stroboscopic_channel,
    fixed_point,
    unvectorize,
    vectorize,
)


def params(temperature=2.0, gamma_tau_se=0.4, g_tau_sa=math.pi / 2, **kw):
    return ModelParams(temperature, gamma_tau_se, g_tau_sa, **kw)


def random_qubit_state(rng):
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def collide_once(rho, p):
    """Direct dense simulation of one collision cycle on a density matrix."""
    u = partial_swap_unitary(p.g_tau_sa)
    joint = kron(rho, p.ancilla_prep.state())
    joint = u @ joint @ u.conj().T
    joint = thermal_map_mat(joint, 0, 2, p)
    return partial_trace_mat(joint, [0], 2)


def random_params(rng):
    preps = [GROUND, EXCITED, PLUS]
    return ModelParams(
        temperature=float(rng.uniform(0.5, 5.0)),
        gamma_tau_se=float(rng.uniform(0.0, 2.0)),
        g_tau_sa=float(rng.uniform(0.0, math.pi / 2)),
        ancilla_prep=preps[int(rng.integers(3))],
    )


def test_vectorization_roundtrip():
    rng = np.random.default_rng(20)
    op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.array_equal(unvectorize(vectorize(op)), op)


def test_superoperator_rejects_non_trace_preserving():
    with pytest.raises(ValueError):
        Superoperator(4, 0.5 * np.eye(4, dtype=complex))


def test_superoperator_rejects_expanding_map():
    with pytest.raises(ValueError):
        Superoperator(4, 1.5 * np.eye(4, dtype=complex))


def test_channel_without_collision_is_relaxation():
    p = params(g_tau_sa=0.0, gamma_tau_se=0.7)
    phi = build_stroboscopic_channel(p)
    pop_decay, coh_decay, p_e = thermal_map_factors(p)
    p_g = 1.0 - p_e
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = p_g + pop_decay * (1 - p_g)
    expected[3, 0] = p_e * (1 - pop_decay)
    expected[0, 3] = p_g * (1 - pop_decay)
    expected[3, 3] = p_e + pop_decay * (1 - p_e)
    expected[1, 1] = expected[2, 2] = coh_decay
    assert np.max(np.abs(phi.mat - expected)) <= 1e-12


def test_full_swap_with_pure_ancilla_resets_system():
    p = params(gamma_tau_se=0.0, g_tau_sa=math.pi / 2)
    phi = build_stroboscopic_channel(p)
    rng = np.random.default_rng(21)
    ground = np.diag([1.0, 0.0]).astype(complex)
    for _ in range(5):
        out = phi.apply(random_qubit_state(rng))
        assert np.max(np.abs(out - ground)) <= 1e-12


def test_channel_matrix_matches_direct_simulation():
    rng = np.random.default_rng(22)
    for _ in range(10):
        p = random_params(rng)
        phi = build_stroboscopic_channel(p)
        rho = random_qubit_state(rng)
        assert np.max(np.abs(phi.apply(rho) - collide_once(rho, p))) <= 1e-12


def test_channel_preserves_validity():
    rng = np.random.default_rng(23)
    for _ in range(100):
        p = random_params(rng)
        phi = build_stroboscopic_channel(p)
        rho = validate_state(random_qubit_state(rng), tol=1e-8)
        validate_state(phi.apply(rho.mat), tol=1e-9)


def test_fixed_point_without_collisions_is_gibbs():
    p = params(g_tau_sa=0.0, gamma_tau_se=0.9)
    rho_star, gap = fixed_point(build_stroboscopic_channel(p))
    assert np.max(np.abs(rho_star.mat - thermal_qubit_state(p).mat)) <= 1e-12
    assert gap > 0


def test_fixed_point_perfect_rethermalization():
    for theta in (0.2, math.pi / 4, math.pi / 2):
        p = params(gamma_tau_se=20.0, g_tau_sa=theta)
        rho_star, _ = fixed_point(build_stroboscopic_channel(p))
        assert np.max(np.abs(rho_star.mat - thermal_qubit_state(p).mat)) <= 1e-6


def test_fixed_point_matches_power_iteration():
    p = params(gamma_tau_se=0.4, g_tau_sa=math.pi / 2)
    phi = build_stroboscopic_channel(p)
    rho_star, _ = fixed_point(phi)
    iterated = thermal_qubit_state(p).mat
    for _ in range(500):
        iterated = phi.apply(iterated)
    assert np.max(np.abs(rho_star.mat - iterated)) <= 1e-10


def test_fixed_point_residual():
    rng = np.random.default_rng(24)
    for _ in range(10):
        p = random_params(rng)
        if p.gamma_tau_se < 1e-3 and p.g_tau_sa < 1e-3:
            continue
        phi = build_stroboscopic_channel(p)
        rho_star, _ = fixed_point(phi)
        assert np.max(np.abs(phi.apply(rho_star.mat) - rho_star.mat)) <= 1e-12


def test_fixed_point_seed_independence():
    p = params(gamma_tau_se=0.2, g_tau_sa=0.8, ancilla_prep=EXCITED)
    phi = build_stroboscopic_channel(p)
    rho_star, gap = fixed_point(phi)
    assert gap > 1e-6
    rng = np.random.default_rng(25)
    for seed_state in (np.eye(2) / 2, thermal_qubit_state(p).mat, random_qubit_state(rng)):
        it = np.array(seed_state)
        for _ in range(3000):
            it = phi.apply(it)
        assert np.max(np.abs(rho_star.mat - it)) <= 1e-9


def test_degenerate_channel_raises():
    # no bath, no collision: every state is fixed
    p = params(gamma_tau_se=0.0, g_tau_sa=0.0)
    with pytest.raises(DegenerateFixedPoint):
        fixed_point(build_stroboscopic_channel(p))


def test_fixed_point_diagonal_for_diagonal_preparations():
    for prep in (GROUND, EXCITED):
        p = params(gamma_tau_se=0.3, g_tau_sa=0.9, ancilla_prep=prep)
        rho_star, _ = fixed_point(build_stroboscopic_channel(p))
        assert abs(rho_star.mat[0, 1]) <= 1e-12
        assert abs(rho_star.mat[1, 0]) <= 1e-12
