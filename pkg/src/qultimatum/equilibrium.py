"""Equilibrium checks for the bimatrix games and the continuous EWL game."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classical_game import Bimatrix
from .ewl_scheme import HALF_PI, PI, EWLGame, EWLProfile, closed_form_weights
from .qstate import PAYOFF_ATOL

DEFAULT_P1_STEP = math.pi / 60
DEFAULT_P2_STEP = math.pi / 12
NASH_GAIN_TOL = 1e-6  # in units of money


@dataclass
class EquilibriumReport:
    pure_ne: list[tuple[str, str]]
    payoffs: dict[tuple[str, str], tuple[float, float]]
    dominant_column: Optional[str] = None
    pareto_best: Optional[tuple[str, str]] = None

    @property
    def subgame_perfect(self) -> Optional[tuple[str, str]]:
        """The equilibrium that uses player 2's weakly dominant strategy."""
        if self.dominant_column is None:
            return None
        hits = [ne for ne in self.pure_ne if ne[1] == self.dominant_column]
        return hits[0] if len(hits) == 1 else None

    def to_dict(self) -> dict:
        return {
            "pure_ne": [list(ne) for ne in self.pure_ne],
            "payoffs": {f"{r},{c}": list(v) for (r, c), v in self.payoffs.items()},
            "dominant_column": self.dominant_column,
            "subgame_perfect": list(self.subgame_perfect) if self.subgame_perfect else None,
            "pareto_best": list(self.pareto_best) if self.pareto_best else None,
        }


def _pure_ne_cells(bm: Bimatrix, atol: float) -> list[tuple[int, int]]:
    u1, u2 = bm.cells[..., 0], bm.cells[..., 1]
    row_best = u1 >= u1.max(axis=0, keepdims=True) - atol
    col_best = u2 >= u2.max(axis=1, keepdims=True) - atol
    return [(int(r), int(c)) for r, c in zip(*np.nonzero(row_best & col_best))]


def weakly_dominant_column(bm: Bimatrix, atol: float = PAYOFF_ATOL) -> Optional[str]:
    """Player 2's strategy that is a best reply to every row, if exactly one exists."""
    u2 = bm.cells[..., 1]
    best_everywhere = np.all(u2 >= u2.max(axis=1, keepdims=True) - atol, axis=0)
    hits = np.flatnonzero(best_everywhere)
    return bm.cols[hits[0]] if hits.size == 1 else None


def pareto_best(bm: Bimatrix, cells: list[tuple[int, int]], atol: float = PAYOFF_ATOL) -> Optional[tuple[str, str]]:
    """Cell among ``cells`` whose payoff strictly beats every other one for both players."""
    for r, c in cells:
        v = bm.cells[r, c]
        others = [bm.cells[r2, c2] for r2, c2 in cells if (r2, c2) != (r, c)]
        if others and all(np.all(v > w + atol) for w in others):
            return bm.rows[r], bm.cols[c]
    return None


def pure_nash(bm: Bimatrix, atol: float = PAYOFF_ATOL) -> EquilibriumReport:
    """All pure Nash equilibria (weak inequalities, so ties count)."""
    cells = _pure_ne_cells(bm, atol)
    labels = [(bm.rows[r], bm.cols[c]) for r, c in cells]
    return EquilibriumReport(
        pure_ne=labels,
        payoffs={lab: (float(bm.cells[r, c, 0]), float(bm.cells[r, c, 1])) for lab, (r, c) in zip(labels, cells)},
        dominant_column=weakly_dominant_column(bm, atol),
        pareto_best=pareto_best(bm, cells, atol),
    )


def is_mixed_nash(bm: Bimatrix, row_weights, col_weights, atol: float = PAYOFF_ATOL) -> bool:
    """Check the Nash inequalities for a mixed profile against all pure deviations."""
    x = np.asarray(row_weights, dtype=float)
    y = np.asarray(col_weights, dtype=float)
    if abs(x.sum() - 1) > atol or abs(y.sum() - 1) > atol or (x < 0).any() or (y < 0).any():
        raise ValueError("weights must be probability distributions")
    u1, u2 = bm.cells[..., 0], bm.cells[..., 1]
    p1_value = x @ u1 @ y
    p2_value = x @ u2 @ y
    return bool((u1 @ y).max() <= p1_value + atol and (x @ u2).max() <= p2_value + atol)


@dataclass
class DeviationResult:
    max_gain_p1: float
    max_gain_p2: float
    witness_p1: tuple[float, float]
    witness_p2: tuple[float, float, float, float]
    payoff: tuple[float, float]
    step: float
    p2_step: float
    threshold: float = field(default=0.0)

    @property
    def is_nash(self) -> bool:
        return self.max_gain_p1 < self.threshold and self.max_gain_p2 < self.threshold

    def to_dict(self) -> dict:
        return {
            "max_gain_p1": self.max_gain_p1,
            "max_gain_p2": self.max_gain_p2,
            "witness_p1": list(self.witness_p1),
            "witness_p2": list(self.witness_p2),
            "payoff": list(self.payoff),
            "step": self.step,
            "p2_step": self.p2_step,
            "threshold": self.threshold,
            "is_nash": self.is_nash,
        }


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(int(math.ceil((hi - lo) / step - 1e-9)), 1)
    return np.linspace(lo, hi, n + 1)


def _local_axis(center: float, hi: float, step: float, points: int = 4) -> np.ndarray:
    pts = center + step * np.arange(-points, points + 1) / points
    return np.unique(np.clip(pts, 0.0, hi))


def _p1_payoffs(game: EWLGame, t1, b1, prof: EWLProfile):
    f, u = closed_form_weights(t1, b1, prof.theta2, prof.beta2, prof.theta3, prof.beta3)
    m, d = game.params.money, game.params.delta
    return f * m / 2 + u * d * m


def _p2_payoffs(game: EWLGame, prof: EWLProfile, t2, b2, t3, b3):
    f, u = closed_form_weights(prof.theta1, prof.beta1, t2, b2, t3, b3)
    m, d = game.params.money, game.params.delta
    return f * m / 2 + u * (1 - d) * m


def _p2_best(game, prof, axes):
    grids = np.meshgrid(*axes, indexing="ij")
    vals = _p2_payoffs(game, prof, *grids)
    k = np.unravel_index(np.argmax(vals), vals.shape)
    return float(vals[k]), tuple(float(g[k]) for g in grids)


def grid_deviation_search(
    game: EWLGame,
    profile: EWLProfile,
    step: float = DEFAULT_P1_STEP,
    p2_step: float = DEFAULT_P2_STEP,
    refine: bool = True,
) -> DeviationResult:
    """Largest unilateral gain each player finds on a grid of her own angles.

    Player 1 searches a full ``(theta1, beta1)`` grid with spacing ``step``.
    Player 2 searches a coarse 4-D grid with spacing ``p2_step`` and, when
    ``refine`` is set, a finer local grid around the best coarse point. The
    incumbent strategy is always a candidate, so gains are never negative.
    This can only refute an equilibrium, not prove one.
    """
    if step <= 0 or p2_step <= 0:
        raise ValueError("grid steps must be positive")
    t_axis, b_axis = _axis(0, PI, step), _axis(0, HALF_PI, step)
    base1 =float(_p1_payoffs(game, profile.theta1, profile.beta1, profile))
    base2 = float(_p2_payoffs(game, profile, profile.theta2, profile.beta2, profile.theta3, profile.beta3))

    T, B = np.meshgrid(t_axis, b_axis, indexing="ij")
    v1 = _p1_payoffs(game, T, B, profile)
    k = np.unravel_index(np.argmax(v1), v1.shape)
    best1, wit1 = float(v1[k]), (float(T[k]), float(B[k]))
    if best1 <= base1:
        best1, wit1 = base1, (profile.theta1, profile.beta1)

    coarse = (_axis(0, PI, p2_step), _axis(0, HALF_PI, p2_step), _axis(0, PI, p2_step), _axis(0, HALF_PI, p2_step))
    best2, wit2 = _p2_best(game, profile, coarse)
    if refine:
        his = (PI, HALF_PI, PI, HALF_PI)
        local = tuple(_local_axis(c, hi, p2_step) for c, hi in zip(wit2, his))
        fine2, fine_wit2 = _p2_best(game, profile, local)
        if fine2 > best2:
            best2, wit2 = fine2, fine_wit2
    if best2 <= base2:
        best2, wit2 = base2, (profile.theta2, profile.beta2, profile.theta3, profile.beta3)

    return DeviationResult(
        max_gain_p1=best1 - base1,
        max_gain_p2=best2 - base2,
        witness_p1=wit1,
        witness_p2=wit2,
        payoff=(base1, base2),
        step=step,
        p2_step=p2_step,
        threshold=NASH_GAIN_TOL * game.params.money,
    )
