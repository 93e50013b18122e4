import itertools
import math

import numpy as np
import pytest

from qultimatum import qstate
from qultimatum.classical_game import GameParams, build_gamma1, normal_representation
from qultimatum.ewl_scheme import (
    EWLGame,
    EWLProfile,
    behavioral_mixed_interval,
    best_response_p1_family,
    classical_embedding,
    classical_profile,
    entangled_basis,
    ewl_final_state,
    ewl_payoff_closed,
    ewl_payoff_numeric,
    in_subset1,
    in_subset2,
    payoff_report,
    sample_subset1,
    sample_subset2,
)

PI = math.pi


def upsilon(profile):
    """Amplitudes (times sqrt 2) written out term by term."""
    t = [profile.theta1, profile.theta2, profile.theta3]
    b = [profile.beta1, profile.beta2, profile.beta3]
    out = np.zeros(8, dtype=complex)
    for x in itertools.product((0, 1), repeat=3):
        n = sum(x)
        xb = [1 - xi for xi in x]
        a = 1j**n * np.exp(-1j * sum(xi * bi for xi, bi in zip(x, b)))
        a *= np.prod([math.cos((xi * PI - ti) / 2) for xi, ti in zip(x, t)])
        c = (-1j) ** n * np.exp(1j * sum(xi * bi for xi, bi in zip(xb, b)))
        c *= np.prod([math.cos((xi * PI - ti) / 2) for xi, ti in zip(xb, t)])
        out[4 * x[0] + 2 * x[1] + x[2]] = a + c
    return out / math.sqrt(2)


def random_profile(rng):
    t = rng.uniform(0, PI, 3)
    b = rng.uniform(0, PI / 2, 3)
    return EWLProfile(t[0], b[0], t[1], b[1], t[2], b[2])


def test_entangled_basis():
    v = entangled_basis(0, 0, 0)
    np.testing.assert_allclose(v[[0, 7]], [1 / math.sqrt(2), 1j / math.sqrt(2)])
    v = entangled_basis(1, 1, 1)
    np.testing.assert_allclose(v[[7, 0]], [1 / math.sqrt(2), 1j / math.sqrt(2)])
    gram = np.array([[np.vdot(entangled_basis(*qstate.index_bits(a)), entangled_basis(*qstate.index_bits(b))) for b in range(8)] for a in range(8)])
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-15)


def test_final_state_examples():
    np.testing.assert_allclose(ewl_final_state(EWLProfile(0, 0, 0, 0, 0, 0)), entangled_basis(0, 0, 0), atol=1e-15)
    psi = ewl_final_state(EWLProfile(PI, 0, 0, 0, 0, 0))
    target = np.zeros(8, dtype=complex)
    target[0b100], target[0b011] = 1 / math.sqrt(2), 1j / math.sqrt(2)
    np.testing.assert_allclose(psi, 1j * target, atol=1e-15)


def test_final_state_matches_upsilon_formula(rng):
    for _ in range(1000):
        prof = random_profile(rng)
        np.testing.assert_allclose(ewl_final_state(prof), upsilon(prof), atol=1e-12)


def test_numeric_payoff_examples(params):
    game = EWLGame(params)
    np.testing.assert_allclose(ewl_payoff_numeric(game, EWLProfile(PI, 0, 0, 0, 0, 0)), params.unfair, atol=1e-12)
    np.testing.assert_allclose(ewl_payoff_numeric(game, EWLProfile(PI, 0, PI, PI / 2, PI, 0)), params.fair, atol=1e-12)
    for b1, b2 in [(0, 0), (0.3, 1.2), (PI / 2, PI / 2)]:
        np.testing.assert_allclose(ewl_payoff_numeric(game, EWLProfile(PI, b1, 0, b2, PI, 0)), [0, 0], atol=1e-12)


def test_closed_payoff_examples(params):
    game = EWLGame(params)
    np.testing.assert_allclose(ewl_payoff_closed(game, EWLProfile(0, 0, 0, 0, 0, 0)), params.fair, atol=1e-15)
    np.testing.assert_allclose(ewl_payoff_closed(game, EWLProfile(PI, 0, 0, 0, PI, 0)), [0, 0], atol=1e-15)


def test_closed_matches_numeric(params, rng):
    game = EWLGame(params)
    for _ in range(1000):
        prof = random_profile(rng)
        np.testing.assert_allclose(ewl_payoff_closed(game, prof), ewl_payoff_numeric(game, prof), atol=1e-9)


def test_payoff_report(params):
    rep = payoff_report(EWLGame(params), EWLProfile(PI, 0, 0, 0, 0, 0))
    assert rep["unfair_weight"] == pytest.approx(1.0)
    assert rep["E1"] == pytest.approx(0.7) and rep["E2"] == pytest.approx(0.3)


def test_classical_profiles_reproduce_bimatrix(params):
    game = EWLGame(params)
    classical = normal_representation(build_gamma1(params)).cells
    for k1, k2, k3 in itertools.product((0, 1), repeat=3):
        np.testing.assert_allclose(ewl_payoff_numeric(game, classical_profile(k1, k2, k3)), classical[k1, 2 * k2 + k3], atol=1e-12)


def test_classical_embedding(params):
    game = EWLGame(params)
    e, prof = classical_embedding(params, 1, 1, 0.3)
    np.testing.assert_allclose(e, params.fair)
    e, prof = classical_embedding(params, 0, 0.2, 1)
    np.testing.assert_allclose(e, params.unfair)
    e, prof = classical_embedding(params, 0.5, 0.5, 0.5)
    np.testing.assert_allclose(e, (params.fair + params.unfair) / 4)
    np.testing.assert_allclose(ewl_payoff_numeric(game, prof), e, atol=1e-12)
    with pytest.raises(ValueError):
        classical_embedding(params, 1.2, 0, 0)


def test_subsets():
    assert in_subset1(EWLProfile(PI, PI / 4, PI, PI / 8, PI, PI / 8))
    assert in_subset2(EWLProfile(0, 0.3, 0, 0.9, PI, 0))
    sp = EWLProfile(PI, 0, 0, 0, 0, 0)
    assert not in_subset1(sp) and not in_subset2(sp)
    # beta2 + beta3 above pi/4 is outside the first family
    assert not in_subset1(EWLProfile(PI, 0.2, PI, 0.7, PI, PI / 2 - 0.9))


@pytest.mark.parametrize("delta", [0.6, 0.7, 0.9])
def test_family_members_pay_fair(delta, rng):
    params = GameParams(delta)
    game = EWLGame(params)
    for _ in range(20):
        for prof in (sample_subset1(rng), sample_subset2(rng)):
            assert in_subset1(prof) or in_subset2(prof)
            np.testing.assert_allclose(ewl_payoff_numeric(game, prof), params.fair, atol=1e-12)


def test_best_response_family(params):
    assert best_response_p1_family(0, 0) == (PI, PI / 2)
    assert best_response_p1_family(PI / 8, PI / 8) == pytest.approx((PI, PI / 4))
    with pytest.raises(ValueError):
        best_response_p1_family(PI / 4, 0.1)


@pytest.mark.parametrize("b2,b3", [(0, 0), (PI / 8, PI / 8), (0.1, 0.5), (PI / 4, 0)])
def test_best_response_beats_grid(params, b2, b3):
    game = EWLGame(params)
    t1, bb1 = best_response_p1_family(b2, b3)
    best = ewl_payoff_numeric(game, EWLProfile(t1, bb1, PI, b2, PI, b3))[0]
    assert best == pytest.approx(0.5, abs=1e-12)
    step = PI / 60
    for t in np.arange(0, 61) * step:
        for b in np.arange(0, 31) * step:
            e1 = ewl_payoff_numeric(game, EWLProfile(min(t, PI), min(b, PI / 2), PI, b2, PI, b3))[0]
            assert e1 <= best + 1e-12


@pytest.mark.parametrize("delta", [0.55, 0.7, 0.95])
def test_behavioral_mixed_interval(delta):
    params = GameParams(delta)
    game = EWLGame(params)
    lo, hi = behavioral_mixed_interval(params)
    assert lo == pytest.approx(2 * math.acos(1 / math.sqrt(2 * delta)))
    assert hi == PI / 2
    for theta in np.linspace(lo, hi, 7):
        # player 1 gains nothing by switching to the unfair proposal
        stay = ewl_payoff_numeric(game, EWLProfile(0, 0, 0, 0, theta, 0))[0]
        switch = ewl_payoff_numeric(game, EWLProfile(PI, 0, 0, 0, theta, 0))[0]
        assert stay == pytest.approx(0.5, abs=1e-12)
        assert switch <= stay + 1e-12


def test_profile_json_roundtrip():
    prof = EWLProfile(PI, PI / 4, PI, PI / 4, PI / 2, 0)
    assert EWLProfile.from_dict(prof.to_dict()) == prof
    with pytest.raises(ValueError):
        EWLProfile(PI + 0.1, 0, 0, 0, 0, 0)
