"""Reproducibility suite: one check per published claim.

Every check is deterministic for a given seed and returns a ``CheckResult``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qstate
from .classical_game import GameParams, build_gamma1, normal_representation
from .equilibrium import grid_deviation_search, pure_nash
from .ewl_scheme import (
    HALF_PI,
    PI,
    EWLGame,
    EWLProfile,
    classical_embedding,
    classical_profile,
    closed_form_weights,
    ewl_payoff_closed,
    ewl_payoff_numeric,
    in_subset1,
    in_subset2,
    sample_subset1,
    sample_subset2,
)
from .mw_scheme import MWGame, all_mw_profiles, mw_matrix, mw_payoff, preset
from .sequential import OutcomeOperator, build_tree, check_outcome_equivalence

EXACT = 1e-12
LOOSE = 1e-9
_OPEN_HALF = float(np.nextafter(0.5, 1.0))


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key} {self.title}: {self.detail}"

    def to_dict(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class SuiteConfig:
    delta: float = 0.7
    delta_prime: float = 0.8
    money: float = 1.0
    seed: int = 0

    @property
    def params(self) -> GameParams:
        return GameParams(self.delta, self.money)


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def check_classical_ne(cfg: SuiteConfig) -> CheckResult:
    expected = {("c0", "d0e1"), ("c1", "d0e0"), ("c1", "d1e0")}
    bad = []
    for delta in (0.55, 0.7, 0.9):
        rep = pure_nash(normal_representation(build_gamma1(GameParams(delta, cfg.money))))
        if set(rep.pure_ne) != expected or len(rep.pure_ne) != 3 or rep.subgame_perfect != ("c1", "d0e0"):
            bad.append(delta)
    return CheckResult(
        "C1",
        "classical pure NE and subgame-perfect pick",
        not bad,
        "NE = {(c0,d0e1),(c1,d0e0),(c1,d1e0)}, pick (c1,d0e0) for delta in {0.55,0.7,0.9}"
        + (f"; mismatched at {bad}" if bad else ""),
    )


def _permuted_equal(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    for rp in itertools.permutations(range(2)):
        for cp in itertools.permutations(range(4)):
            if np.max(np.abs(a[np.ix_(rp, cp)] - b)) <= atol:
                return True
    return False


def check_mw_classical_limit(cfg: SuiteConfig) -> CheckResult:
    params = cfg.params
    classical = normal_representation(build_gamma1(params)).cells
    err0 = _max_abs(mw_matrix(MWGame(params, qstate.basis_state(0))).cells, classical)
    failures = [
        x
        for x in range(1, 8)
        if not _permuted_equal(mw_matrix(MWGame(params, qstate.basis_state(x))).cells, classical, EXACT)
    ]
    ok = err0 <= EXACT and not failures
    return CheckResult(
        "C2",
        "MW classical limit",
        ok,
        f"|000> max deviation {err0:.1e}; other basis states permutation-equal: {7 - len(failures)}/7",
    )


def check_mw_psi1(cfg: SuiteConfig) -> CheckResult:
    params = cfg.params
    bm = mw_matrix(MWGame(params, preset("psi_in1").amplitudes))
    rep = pure_nash(bm)
    half = (params.fair + params.unfair) / 2
    quarter = (params.fair + params.unfair) / 4
    ok = (
        set(rep.pure_ne) == {("s0", "s0s0"), ("s1", "s0s1"), ("s1", "s1s1")}
        and _max_abs(bm.cell("s0", "s0s0"), half) <= EXACT
        and _max_abs(bm.cell("s1", "s0s1"), quarter) <= EXACT
        and _max_abs(bm.cell("s1", "s1s1"), quarter) <= EXACT
        and rep.pareto_best == ("s0", "s0s0")
        and rep.dominant_column == "s0s0"
        and len(bm.distinct_payoffs()) == 5
    )
    return CheckResult(
        "C3",
        "MW psi_in1 equilibria",
        ok,
        f"NE {sorted(rep.pure_ne)}, pareto-best {rep.pareto_best}, dominant {rep.dominant_column}, "
        f"{len(bm.distinct_payoffs())} distinct outcomes",
    )


def check_mw_psi2(cfg: SuiteConfig) -> CheckResult:
    params = cfg.params
    bm = mw_matrix(MWGame(params, preset("psi_in2", params, cfg.delta_prime).amplitudes))
    rep = pure_nash(bm)
    fair = bm.cell("s0", "s0s0")
    deviation = bm.cell("s1", "s0s0")[0]
    expected_dev = params.delta * params.money / (2 * cfg.delta_prime)
    ok = (
        ("s0", "s0s0") in rep.pure_ne
        and _max_abs(fair, [params.money / 2, params.money / 2]) <= EXACT
        and abs(deviation - expected_dev) <= EXACT
        and deviation < params.money / 2
        and rep.dominant_column == "s0s0"
    )
    return CheckResult(
        "C4",
        "MW psi_in2 fair division",
        ok,
        f"payoff ({fair[0]:.12f}, {fair[1]:.12f}), player-1 deviation {deviation:.6f} "
        f"(expected {expected_dev:.6f}), dominant {rep.dominant_column}",
    )


def check_mw_plus(cfg: SuiteConfig) -> CheckResult:
    game = MWGame(cfg.params, preset("plus_plus_plus").amplitudes)
    pays = np.array([mw_payoff(game, p) for p in all_mw_profiles()])
    spread = float(np.max(np.abs(pays - pays[0])))
    return CheckResult("C5", "MW |+++> insensitivity", spread <= EXACT, f"max spread {spread:.1e}")


def random_ewl_profile(rng: np.random.Generator) -> EWLProfile:
    t = rng.uniform(0, PI, size=3)
    b = rng.uniform(0, HALF_PI, size=3)
    return EWLProfile(t[0], b[0], t[1], b[1], t[2], b[2])


def check_ewl_closed_form(cfg: SuiteConfig) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    game = EWLGame(cfg.params)
    profiles = [random_ewl_profile(rng) for _ in range(1000)]
    err = max(_max_abs(ewl_payoff_closed(game, p), ewl_payoff_numeric(game, p)) for p in profiles)
    return CheckResult("C6", "EWL closed form vs simulation", err <= LOOSE, f"max deviation {err:.1e} over 1000 profiles")


def check_ewl_embedding(cfg: SuiteConfig) -> CheckResult:
    params = cfg.params
    game = EWLGame(params)
    classical = normal_representation(build_gamma1(params)).cells
    err_pure = 0.0
    for k1, k2, k3 in itertools.product((0, 1), repeat=3):
        cell = classical[k1, 2 * k2 + k3]
        err_pure = max(err_pure, _max_abs(ewl_payoff_numeric(game, classical_profile(k1, k2, k3)), cell))
    err_beh = 0.0
    grid = np.linspace(0, 1, 5)
    for p, q, r in itertools.product(grid, repeat=3):
        expected, prof = classical_embedding(params, p, q, r)
        err_beh = max(err_beh, _max_abs(ewl_payoff_closed(game, prof), expected))
    ok = err_pure <= EXACT and err_beh <= EXACT
    return CheckResult(
        "C7", "EWL classical embedding", ok, f"pure cells {err_pure:.1e}, behavioral 5x5x5 grid {err_beh:.1e}"
    )


def check_ewl_families(cfg: SuiteConfig) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    worst_payoff, worst_gain, fails = 0.0, 0.0, 0
    for delta in (0.6, 0.7, 0.9):
        game = EWLGame(GameParams(delta, cfg.money))
        members = [sample_subset1(rng) for _ in range(50)] + [sample_subset2(rng) for _ in range(50)]
        for prof in members:
            if not (in_subset1(prof) or in_subset2(prof)):
                fails += 1
                continue
            worst_payoff = max(worst_payoff, _max_abs(ewl_payoff_numeric(game, prof), game.params.fair))
            res = grid_deviation_search(game, prof)
            worst_gain = max(worst_gain, res.max_gain_p1, res.max_gain_p2)
            fails += not res.is_nash
    # the classical subgame-perfect profile is not an equilibrium here
    counter_ok = True
    for delta in (0.6, 0.7, 0.9):
        game = EWLGame(GameParams(delta, cfg.money))
        sp = EWLProfile(PI, 0, 0, 0, 0, 0)
        res = grid_deviation_search(game, sp)
        named = ewl_payoff_numeric(game, sp.with_player2(PI, HALF_PI, PI, 0))[1]
        before = ewl_payoff_numeric(game, sp)[1]
        target = (delta - 0.5) * cfg.money
        counter_ok &= (
            not res.is_nash
            and res.max_gain_p2 >= target - EXACT
            and abs(before - (1 - delta) * cfg.money) <= EXACT
            and abs(named - cfg.money / 2) <= EXACT
        )
    ok = fails == 0 and worst_payoff <= EXACT and counter_ok
    return CheckResult(
        "C8",
        "EWL equilibrium families",
        ok,
        f"300 members: max |E - u_f| {worst_payoff:.1e}, max grid gain {worst_gain:.1e}, failures {fails}; "
        f"((pi,0),(0,0,0,0)) refuted: {counter_ok}",
    )


def check_ewl_annihilation(cfg: SuiteConfig) -> CheckResult:
    game = EWLGame(cfg.params)
    betas = np.linspace(0, HALF_PI, 11)
    worst = max(
        float(np.max(np.abs(ewl_payoff_numeric(game, EWLProfile(PI, b1, 0.0, b2, PI, 0.0)))))
        for b1 in betas
        for b2 in betas
    )
    return CheckResult("C9", "EWL annihilation", worst <= EXACT, f"max |E| {worst:.1e} on 11x11 beta grid")


def check_outcome_equivalence_suite(cfg: SuiteConfig) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(1000):
        rho = qstate.to_density(qstate.random_pure_state(rng))
        o = rng.uniform(-1, 1, size=(4, 2))
        X = OutcomeOperator(*(tuple(v) for v in o))
        for prof in all_mw_profiles():
            worst = max(worst, check_outcome_equivalence(rho, prof, X))
    return CheckResult(
        "C10", "sequential vs direct outcome equivalence", worst < EXACT, f"max discrepancy {worst:.1e} over 8000 cases"
    )


def check_tree(cfg: SuiteConfig) -> CheckResult:
    params = cfg.params
    X = OutcomeOperator.ultimatum(params)
    tree = build_tree(qstate.to_density(qstate.basis_state(0)), X)
    chance_ok = all(tree.chance[k1][i] == (1.0 if k1 == i else 0.0) for k1 in (0, 1) for i in (0, 1))
    expected_leaves = {(0, 0, 0): X.O00, (0, 0, 1): X.O01, (1, 1, 0): X.O10, (1, 1, 1): X.O11}
    leaves_ok = set(tree.leaves) == set(expected_leaves) and all(
        _max_abs(tree.leaves[k], v) <= EXACT for k, v in expected_leaves.items()
    )
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(100):
        psi = qstate.random_pure_state(rng)
        t = build_tree(qstate.to_density(psi), X)
        game = MWGame(params, psi)
        for prof in all_mw_profiles():
            worst = max(worst, _max_abs(t.fold(prof), mw_payoff(game, prof)))
    ok = chance_ok and leaves_ok and worst <= EXACT
    return CheckResult(
        "C11",
        "quantum game tree",
        ok,
        f"|000> chance probs delta(k1,iota): {chance_ok}, leaves O00..O11: {leaves_ok}, "
        f"fold vs MW payoff max {worst:.1e}",
    )


def check_payoff_invariants(cfg: SuiteConfig) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    m = cfg.money
    violations = 0
    profiles = all_mw_profiles()
    for _ in range(10_000):
        params = GameParams(float(rng.uniform(_OPEN_HALF, 1.0)), m)
        game = MWGame(params, qstate.random_pure_state(rng))
        e = mw_payoff(game, profiles[rng.integers(8)])
        violations += not (e[0] >= e[1] - EXACT and e[1] <= m / 2 + EXACT and e.sum() <= m + EXACT)
    deltas = rng.uniform(_OPEN_HALF, 1.0, size=10_000)
    t = rng.uniform(0, PI, size=(3, 10_000))
    b = rng.uniform(0, HALF_PI, size=(3, 10_000))
    f, u = closed_form_weights(t[0], b[0], t[1], b[1], t[2], b[2])
    e1 = f * m / 2 + u * deltas * m
    e2 = f * m / 2 + u * (1 - deltas) * m
    violations += int(np.sum(~((e1 >= e2 - EXACT) & (e2 <= m / 2 + EXACT) & (e1 + e2 <= m + EXACT))))
    return CheckResult(
        "C12", "global payoff invariants", violations == 0, f"{violations} violations in 2 x 10^4 MW/EWL samples"
    )


CHECKS: list[Callable[[SuiteConfig], CheckResult]] = [
    check_classical_ne,
    check_mw_classical_limit,
    check_mw_psi1,
    check_mw_psi2,
    check_mw_plus,
    check_ewl_closed_form,
    check_ewl_embedding,
    check_ewl_families,
    check_ewl_annihilation,
    check_outcome_equivalence_suite,
    check_tree,
    check_payoff_invariants,
]


def run_all(cfg: SuiteConfig = SuiteConfig()) -> list[CheckResult]:
    return [check(cfg) for check in CHECKS]
