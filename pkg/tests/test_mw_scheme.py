import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qultimatum import qstate
from qultimatum.classical_game import GameParams, build_gamma1, normal_representation
from qultimatum.equilibrium import pure_nash
from qultimatum.mw_scheme import (
    MWGame,
    MWProfile,
    all_mw_profiles,
    load_state,
    mw_matrix,
    mw_payoff,
    preset,
    state_from_config,
)


def bookkeeping_payoff(params, lam, kappas):
    """Move each |lambda_x|^2 to x XOR kappa, then read the accepted outcomes."""
    k1, k2, k3 = kappas
    fair = unfair = 0.0
    for x1, x2, x3 in itertools.product((0, 1), repeat=3):
        w = abs(lam[4 * x1 + 2 * x2 + x3]) ** 2
        y1, y2, y3 = x1 ^ k1, x2 ^ k2, x3 ^ k3
        if y1 == 0 and y2 == 0:
            fair += w
        elif y1 == 1 and y3 == 0:
            unfair += w
    return fair * params.fair + unfair * params.unfair


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_mw_payoff_matches_bookkeeping(seed):
    params = GameParams(0.7)
    lam = qstate.random_pure_state(np.random.default_rng(seed))
    game = MWGame(params, lam)
    for prof in all_mw_profiles():
        np.testing.assert_allclose(mw_payoff(game, prof), bookkeeping_payoff(params, lam, prof.bits), atol=1e-12)


def test_flip_second_qubit_payoff(params, rng):
    lam = qstate.random_pure_state(rng)
    e = mw_payoff(MWGame(params, lam), MWProfile(0, 1, 0))
    p = np.abs(lam) ** 2
    expected = params.fair * (p[0b010] + p[0b011]) + params.unfair * (p[0b100] + p[0b110])
    np.testing.assert_allclose(e, expected, atol=1e-12)


def test_basis_000_gives_classical_cells(params):
    game = MWGame(params, qstate.basis_state(0))
    np.testing.assert_allclose(mw_payoff(game, MWProfile(1, 0, 0)), params.unfair)
    classical = normal_representation(build_gamma1(params))
    np.testing.assert_allclose(mw_matrix(game).cells, classical.cells, atol=1e-12)


def test_psi_in1_fair_profile(params):
    game = MWGame(params, preset("psi_in1").amplitudes)
    np.testing.assert_allclose(mw_payoff(game, MWProfile(0, 0, 0)), (params.fair + params.unfair) / 2, atol=1e-12)
    assert len(mw_matrix(game).distinct_payoffs()) == 5


@pytest.mark.parametrize("x", range(8))
def test_basis_states_permute_classical_table(params, x):
    classical = normal_representation(build_gamma1(params)).cells
    table = mw_matrix(MWGame(params, qstate.basis_state(x))).cells
    x1, x2, x3 = qstate.index_bits(x)
    # profile kappa on |x> lands where the classical profile kappa XOR x would
    for k1, k2, k3 in itertools.product((0, 1), repeat=3):
        np.testing.assert_allclose(table[k1, 2 * k2 + k3], classical[k1 ^ x1, 2 * (k2 ^ x2) + (k3 ^ x3)], atol=1e-12)


def test_presets(params):
    p1 = np.abs(preset("psi_in1").amplitudes) ** 2
    np.testing.assert_allclose(p1[[0, 1, 4, 6]], 0.25)
    assert p1.sum() == pytest.approx(1.0)
    p2 = np.abs(preset("psi_in2", params, 0.8).amplitudes) ** 2
    assert p2[0] == pytest.approx(0.625, abs=1e-15)
    assert p2[1] == pytest.approx(0.375, abs=1e-15)
    np.testing.assert_allclose(preset("plus_plus_plus").amplitudes, np.full(8, 1 / math.sqrt(8)))


@pytest.mark.parametrize("dp", [0.7, 0.65, 1.0, 1.2])
def test_psi_in2_range(params, dp):
    with pytest.raises(ValueError):
        preset("psi_in2", params, dp)


def test_psi_in2_claims(params):
    game = MWGame(params, preset("psi_in2", params, 0.8).amplitudes)
    bm = mw_matrix(game)
    rep = pure_nash(bm)
    assert ("s0", "s0s0") in rep.pure_ne
    np.testing.assert_allclose(bm.cell("s0", "s0s0"), [0.5, 0.5], atol=1e-12)
    assert bm.cell("s1", "s0s0")[0] == pytest.approx(0.4375, abs=1e-12)
    assert rep.dominant_column == "s0s0"


def test_psi_in1_claims(params):
    bm = mw_matrix(MWGame(params, preset("psi_in1").amplitudes))
    rep = pure_nash(bm)
    assert set(rep.pure_ne) == {("s0", "s0s0"), ("s1", "s0s1"), ("s1", "s1s1")}
    quarter = (params.fair + params.unfair) / 4
    np.testing.assert_allclose(bm.cell("s1", "s0s1"), quarter, atol=1e-12)
    np.testing.assert_allclose(bm.cell("s1", "s1s1"), quarter, atol=1e-12)
    assert rep.pareto_best == ("s0", "s0s0")
    assert rep.dominant_column == "s0s0"


def test_plus_state_insensitive(params):
    game = MWGame(params, preset("plus_plus_plus").amplitudes)
    pays = [mw_payoff(game, p) for p in all_mw_profiles()]
    for p in pays:
        np.testing.assert_allclose(p, pays[0], atol=1e-12)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 1.0, exclude_min=True, exclude_max=True))
def test_payoff_invariants(seed, delta):
    params = GameParams(delta)
    game = MWGame(params, qstate.random_pure_state(np.random.default_rng(seed)))
    for prof in all_mw_profiles():
        e1, e2 = mw_payoff(game, prof)
        assert e1 >= e2 - 1e-12
        assert e2 <= 0.5 + 1e-12
        assert e1 + e2 <= 1.0 + 1e-12


def test_state_from_config(params):
    amps = [[0.5, 0.0], [0.0, 0.5], [0, 0], [0, 0], [0.5, 0], [0, 0], [0, -0.5], [0, 0]]
    st_ = state_from_config({"amplitudes": amps})
    assert st_.amplitudes[1] == 0.5j
    assert state_from_config({"preset": "psi_in2", "delta_prime": 0.8}, params).name == "psi_in2"
    with pytest.raises(ValueError, match="normalized"):
        state_from_config({"amplitudes": [[1, 0]] * 8})
    with pytest.raises(ValueError):
        state_from_config({"something": 1})
    # within 1e-9 of normalized is accepted
    near = [[1 + 4e-10, 0]] + [[0, 0]] * 7
    state_from_config({"amplitudes": near})


def test_load_state_from_file(tmp_path, params):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"preset": "psi_in1"}))
    assert load_state(str(f), params).name == "psi_in1"
    assert load_state("basis:101").name == "basis(101)"
    with pytest.raises(ValueError):
        load_state(str(tmp_path / "missing.json"))
