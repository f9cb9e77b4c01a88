import math

import numpy as np
import pytest

from colltherm.chain import (
    ChainConfig,
    ExceedsAncillaCap,
    UnsupportedPrep,
    build_chain_register,
    build_chain_state,
    pair_coherence,
    single_ancilla_population,
)
from colltherm.linalg import kron, partial_trace
from colltherm.model import EXCITED, GROUND, PLUS, ModelParams, thermal_qubit_state


def params(temperature=2.0, gamma_tau_se=0.4, g_tau_sa=math.pi / 100, **kw):
    return ModelParams(temperature, gamma_tau_se, g_tau_sa, **kw)


def test_config_cap():
    with pytest.raises(ExceedsAncillaCap):
        ChainConfig(params(), 13)
    with pytest.raises(ValueError):
        ChainConfig(params(), 0)


def test_config_cap_override_warns():
    with pytest.warns(ResourceWarning):
        ChainConfig(params(), 5, max_ancillas=13)


def test_single_ancilla_full_swap_thermalized_is_gibbs():
    p = params(gamma_tau_se=20.0, g_tau_sa=math.pi / 2)
    state = build_chain_state(ChainConfig(p, 1))
    assert np.max(np.abs(state.mat - thermal_qubit_state(p).mat)) <= 1e-6


def test_no_interaction_gives_product_of_preparations():
    for prep in (GROUND, PLUS):
        p = params(g_tau_sa=0.0, ancilla_prep=prep)
        state = build_chain_state(ChainConfig(p, 3))
        single = prep.state()
        expected = kron(kron(single, single), single)
        assert np.max(np.abs(state.mat - expected)) <= 1e-14


def test_population_matches_pipeline():
    for gts in (0.1, 0.4, 1.0):
        p = params(gamma_tau_se=gts)
        state = build_chain_state(ChainConfig(p, 1))
        assert abs(state.mat[1, 1].real - single_ancilla_population(p)) <= 1e-10


def test_pair_coherence_matches_pipeline():
    for theta in (math.pi / 100, math.pi / 8):
        p = params(g_tau_sa=theta)
        state = build_chain_state(ChainConfig(p, 2))
        assert abs(state.mat[1, 2] - pair_coherence(p)) <= 1e-10


def test_population_limits():
    # full thermalization with a full swap hands over the Gibbs population
    p = params(gamma_tau_se=30.0, g_tau_sa=math.pi / 2)
    n = p.n_bar
    assert abs(single_ancilla_population(p) - n / (2 * n + 1)) <= 1e-12
    # Zeno limit: no information flows
    p = params(gamma_tau_se=1e-9)
    assert single_ancilla_population(p) <= 1e-8


def test_pair_coherence_limits():
    assert abs(pair_coherence(params(gamma_tau_se=50.0))) <= 1e-10
    assert abs(pair_coherence(params(g_tau_sa=math.pi / 2))) <= 1e-15


def test_closed_forms_reject_non_ground_preparations():
    for prep in (EXCITED, PLUS):
        with pytest.raises(UnsupportedPrep):
            single_ancilla_population(params(ancilla_prep=prep))
        with pytest.raises(UnsupportedPrep):
            pair_coherence(params(ancilla_prep=prep))


@pytest.mark.parametrize("prep", [GROUND, EXCITED, PLUS])
def test_translation_invariance_of_marginals(prep):
    p = params(gamma_tau_se=0.3, g_tau_sa=0.5, ancilla_prep=prep)
    state = build_chain_state(ChainConfig(p, 3))
    marginals = [partial_trace(state, [k]).mat for k in range(3)]
    for other in marginals[1:]:
        assert np.max(np.abs(other - marginals[0])) <= 1e-10


@pytest.mark.parametrize("prep", [GROUND, EXCITED, PLUS])
def test_marginal_consistency_across_block_lengths(prep):
    # dropping the last ancilla of an (N)-block reproduces the (N-1)-block
    p = params(gamma_tau_se=0.4, g_tau_sa=0.7, ancilla_prep=prep)
    big = build_chain_state(ChainConfig(p, 3))
    small = build_chain_state(ChainConfig(p, 2))
    reduced = partial_trace(big, [0, 1])
    assert np.max(np.abs(reduced.mat - small.mat)) <= 1e-10


@pytest.mark.parametrize("prep", [GROUND, EXCITED])
def test_register_has_no_cross_excitation_coherences(prep):
    # diagonal preparations: entries connecting basis states of different
    # total excitation number vanish in the full (ancillas + probe) register
    p = params(gamma_tau_se=0.3, g_tau_sa=0.9, ancilla_prep=prep)
    register = build_chain_register(ChainConfig(p, 3))
    dim = register.dim
    weights = np.array([bin(i).count("1") for i in range(dim)])
    mask = weights[:, None] != weights[None, :]
    assert np.max(np.abs(register.mat[mask])) <= 1e-12


def test_chain_state_is_validated():
    state = build_chain_state(ChainConfig(params(ancilla_prep=PLUS), 2))
    assert abs(np.trace(state.mat) - 1.0) <= 1e-12
    assert np.min(np.linalg.eigvalsh(state.mat)) >= -1e-9
