"""The classical two-proposal ultimatum game.

Player 1 proposes a fair split ``c0`` or an unfair split ``c1``; player 2
then accepts (``d0`` / ``e0``) or rejects (``d1`` / ``e1``). Histories are
tuples of action names, e.g. ``("c1", "e0")``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .qstate import ATOL

CHANCE = "chance"

History = tuple[str, ...]
Player = Union[int, str]

ROW_LABELS = ("c0", "c1")
COL_LABELS = ("d0e0", "d0e1", "d1e0", "d1e1")


@dataclass(frozen=True)
class GameParams:
    """Division factor ``delta`` (1/2 < delta < 1) and the amount shared."""

    delta: float = 0.7
    money: float = 1.0

    def __post_init__(self):
        if not (0.5 < self.delta < 1.0):
            raise ValueError(f"delta must satisfy 1/2 < delta < 1, got {self.delta!r}")
        if not (self.money > 0 and np.isfinite(self.money)):
            raise ValueError(f"money must be positive and finite, got {self.money!r}")

    @property
    def fair(self) -> np.ndarray:
        return np.array([self.money / 2, self.money / 2])

    @property
    def unfair(self) -> np.ndarray:
        return np.array([self.delta * self.money, (1 - self.delta) * self.money])


@dataclass
class ExtensiveGame:
    """Finite extensive game.

    ``player`` maps every nonterminal history to a player id or ``CHANCE``;
    ``information_sets`` maps each player to an ordered tuple of information
    sets (frozensets of histories); ``chance`` holds the action distribution
    at chance histories.
    """

    histories: frozenset[History]
    player: dict[History, Player]
    information_sets: dict[int, tuple[frozenset[History], ...]]
    payoffs: dict[History, np.ndarray]
    chance: dict[History, dict[str, float]] = field(default_factory=dict)

    def actions(self, history: History) -> tuple[str, ...]:
        n = len(history)
        return tuple(sorted(h[-1] for h in self.histories if len(h) == n + 1 and h[:n] == history))

    def is_terminal(self, history: History) -> bool:
        return not self.actions(history)

    @property
    def terminal_histories(self) -> list[History]:
        return sorted(h for h in self.histories if self.is_terminal(h))

    @property
    def nonterminal_histories(self) -> list[History]:
        return sorted(h for h in self.histories if not self.is_terminal(h))

    def information_set_of(self, history: History) -> tuple[int, int]:
        """Return ``(player, index)`` of the information set holding ``history``."""
        p = self.player[history]
        for k, info in enumerate(self.information_sets.get(p, ())):
            if history in info:
                return p, k
        raise KeyError(f"history {history!r} is in no information set of player {p!r}")

    def validate(self) -> None:
        if () not in self.histories:
            raise ValueError("the empty history must belong to the game")
        for h in self.histories:
            if h and h[:-1] not in self.histories:
                raise ValueError(f"history set is not prefix-closed at {h!r}")
        for h in self.nonterminal_histories:
            if h not in self.player:
                raise ValueError(f"no player assigned to {h!r}")
        for h, p in self.player.items():
            if self.is_terminal(h):
                raise ValueError(f"player assigned to terminal history {h!r}")
            if p == CHANCE:
                dist = self.chance.get(h)
                if dist is None or set(dist) != set(self.actions(h)):
                    raise ValueError(f"chance history {h!r} needs a distribution over its actions")
                if abs(sum(dist.values()) - 1.0) > ATOL:
                    raise ValueError(f"chance distribution at {h!r} does not sum to 1")
            else:
                self.information_set_of(h)
        for p, infos in self.information_sets.items():
            for info in infos:
                action_sets = {self.actions(h) for h in info}
                if len(action_sets) != 1:
                    raise ValueError(f"information set {sorted(info)!r} mixes action sets")
                if any(self.player.get(h) != p for h in info):
                    raise ValueError(f"information set {sorted(info)!r} is not owned by player {p!r}")
        missing = set(self.terminal_histories) - set(self.payoffs)
        if missing:
            raise ValueError(f"terminal histories without payoffs: {sorted(missing)!r}")


@dataclass(frozen=True)
class PureProfile:
    """Pure strategy profile: ``s1`` picks ``c_s1``; ``s2 = (k2, k3)`` picks
    ``d_k2`` after ``c0`` and ``e_k3`` after ``c1``."""

    s1: int
    s2: tuple[int, int]

    def __post_init__(self):
        if self.s1 not in (0, 1) or len(self.s2) != 2 or any(b not in (0, 1) for b in self.s2):
            raise ValueError(f"profile bits must be 0 or 1, got {(self.s1, self.s2)!r}")

    def plan(self) -> dict[int, tuple[int, ...]]:
        """Action index chosen at each of a player's information sets."""
        return {1: (self.s1,), 2: tuple(self.s2)}

    @property
    def label(self) -> tuple[str, str]:
        return ROW_LABELS[self.s1], COL_LABELS[2 * self.s2[0] + self.s2[1]]


def build_gamma1(params: GameParams) -> ExtensiveGame:
    c0, c1 = ("c0",), ("c1",)
    zero = np.zeros(2)
    game = ExtensiveGame(
        histories=frozenset([(), c0, c1, c0 + ("d0",), c0 + ("d1",), c1 + ("e0",), c1 + ("e1",)]),
        player={(): 1, c0: 2, c1: 2},
        information_sets={1: (frozenset([()]),), 2: (frozenset([c0]), frozenset([c1]))},
        payoffs={
            ("c0", "d0"): params.fair,
            ("c0", "d1"): zero.copy(),
            ("c1", "e0"): params.unfair,
            ("c1", "e1"): zero.copy(),
        },
    )
    game.validate()
    return game


def outcome(game: ExtensiveGame, profile: PureProfile) -> History:
    """Terminal history reached when both players follow ``profile``."""
    plan = profile.plan()
    h: History = ()
    while not game.is_terminal(h):
        p = game.player[h]
        if p == CHANCE:
            raise ValueError("outcome of a pure profile is undefined past a chance move")
        _, k = game.information_set_of(h)
        h = h + (game.actions(h)[plan[p][k]],)
    return h


def all_profiles() -> list[PureProfile]:
    return [PureProfile(a, (b, c)) for a, b, c in itertools.product((0, 1), repeat=3)]


@dataclass
class Bimatrix:
    """2x4 normal form: ``cells[row, col]`` is the payoff vector ``(p1, p2)``."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=float)
        if self.cells.shape != (len(self.rows), len(self.cols), 2):
            raise ValueError(f"cells shape {self.cells.shape} does not match labels")

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape[0], self.cells.shape[1]

    def cell(self, row: str, col: str) -> np.ndarray:
        return self.cells[self.rows.index(row), self.cols.index(col)]

    def distinct_payoffs(self, decimals: int = 9) -> set[tuple[float, float]]:
        return {tuple(np.round(v, decimals) + 0.0) for v in self.cells.reshape(-1, 2)}

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols), "cells": self.cells.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Bimatrix":
        return cls(tuple(d["rows"]), tuple(d["cols"]), np.array(d["cells"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Bimatrix":
        return cls.from_dict(json.loads(text))


def normal_representation(game: ExtensiveGame) -> Bimatrix:
    cells = np.zeros((2, 4, 2))
    for prof in all_profiles():
        cells[prof.s1, 2 * prof.s2[0] + prof.s2[1]] = game.payoffs[outcome(game, prof)]
    return Bimatrix(ROW_LABELS, COL_LABELS, cells)


def verify_mixed_family(params: GameParams, p: float) -> bool:
    """Is ``c0`` against ``p*d0e0 + (1-p)*d0e1`` a Nash equilibrium?"""
    from .equilibrium import is_mixed_nash

    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be a probability, got {p!r}")
    bm = normal_representation(build_gamma1(params))
    return is_mixed_nash(bm, [1.0, 0.0], [p, 1.0 - p, 0.0, 0.0])


def verify_accept_mixture(params: GameParams, q: float) -> bool:
    """Is ``c1`` against ``q*d0e0 + (1-q)*d1e0`` a Nash equilibrium?"""
    from .equilibrium import is_mixed_nash

    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be a probability, got {q!r}")
    bm = normal_representation(build_gamma1(params))
    return is_mixed_nash(bm, [0.0, 1.0], [q, 0.0, 1.0 - q, 0.0])


def mixed_family_bound(params: GameParams) -> float:
    """Largest weight on ``d0e0`` keeping ``c0`` a best reply: ``1/(2 delta)``."""
    return 1.0 / (2.0 * params.delta)
