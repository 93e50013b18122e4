"""Marinatto-Weber quantization of the ultimatum game.

Player 1 applies the identity or a bit flip to qubit 1, player 2 to qubits
2 and 3. The payoff is read off the computational basis: ``|00x3>`` is the
accepted fair split, ``|1x2 0>`` the accepted unfair split.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import qstate
from .classical_game import Bimatrix, GameParams

MW_ROWS = ("s0", "s1")
MW_COLS = ("s0s0", "s0s1", "s1s0", "s1s1")

PRESETS = ("basis", "psi_in1", "psi_in2", "plus_plus_plus")

# basis indices counted towards each payoff
FAIR_INDICES = (0, 1)  # |000>, |001>
UNFAIR_INDICES = (4, 6)  # |100>, |110>


@dataclass(frozen=True)
class MWProfile:
    kappa1: int
    kappa2: int
    kappa3: int

    def __post_init__(self):
        if any(k not in (0, 1) for k in self.bits):
            raise ValueError(f"profile bits must be 0 or 1, got {self.bits!r}")

    @property
    def bits(self) -> tuple[int, int, int]:
        return self.kappa1, self.kappa2, self.kappa3

    @property
    def label(self) -> tuple[str, str]:
        return MW_ROWS[self.kappa1], MW_COLS[2 * self.kappa2 + self.kappa3]

    def operator(self) -> np.ndarray:
        return qstate.tensor3(*(qstate.pauli(k) for k in self.bits))


def all_mw_profiles() -> list[MWProfile]:
    return [MWProfile(*bits) for bits in itertools.product((0, 1), repeat=3)]


@dataclass
class MWGame:
    params: GameParams
    initial_state: np.ndarray

    def __post_init__(self):
        self.initial_state = qstate.as_pure_state(self.initial_state)


@dataclass(frozen=True)
class StatePreset:
    name: str
    amplitudes: np.ndarray


def payoff_from_weights(params: GameParams, fair_weight: float, unfair_weight: float) -> np.ndarray:
    return fair_weight * params.fair + unfair_weight * params.unfair


def outcome_weights(state: np.ndarray) -> tuple[float, float]:
    """Probabilities of the fair and the unfair accepted outcome."""
    probs = np.abs(state) ** 2
    return float(probs[list(FAIR_INDICES)].sum()), float(probs[list(UNFAIR_INDICES)].sum())


def mw_final_state(game: MWGame, profile: MWProfile) -> np.ndarray:
    return qstate.apply(profile.operator(), game.initial_state)


def mw_payoff(game: MWGame, profile: MWProfile) -> np.ndarray:
    f, u = outcome_weights(mw_final_state(game, profile))
    return payoff_from_weights(game.params, f, u)


def mw_matrix(game: MWGame) -> Bimatrix:
    cells = np.zeros((2, 4, 2))
    for prof in all_mw_profiles():
        cells[prof.kappa1, 2 * prof.kappa2 + prof.kappa3] = mw_payoff(game, prof)
    return Bimatrix(MW_ROWS, MW_COLS, cells)


def preset(
    name: str,
    params: Optional[GameParams] = None,
    delta_prime: Optional[float] = None,
    basis: str = "000",
) -> StatePreset:
    """Named initial states.

    ``psi_in2`` needs ``params`` and ``delta_prime`` with
    ``params.delta < delta_prime < 1``; ``basis`` takes a bit string such as
    ``"101"``.
    """
    if name == "basis":
        if len(basis) != 3 or set(basis) - {"0", "1"}:
            raise ValueError(f"basis label must be three bits, got {basis!r}")
        amps = qstate.basis_state(int(basis, 2))
        return StatePreset(f"basis({basis})", amps)
    if name == "psi_in1":
        amps = np.zeros(qstate.DIM, dtype=complex)
        amps[[0, 1, 4, 6]] = 0.5
        return StatePreset(name, amps)
    if name == "psi_in2":
        if params is None or delta_prime is None:
            raise ValueError("psi_in2 needs params and delta_prime")
        if not (params.delta < delta_prime < 1.0):
            raise ValueError(
                f"psi_in2 needs delta < delta' < 1, got delta={params.delta!r}, delta'={delta_prime!r}"
            )
        a0 = 1.0 / (2.0 * delta_prime)
        amps = np.zeros(qstate.DIM, dtype=complex)
        amps[0] = math.sqrt(a0)
        amps[1] = math.sqrt(1.0 - a0)
        return StatePreset(name, amps)
    if name == "plus_plus_plus":
        return StatePreset(name, np.full(qstate.DIM, 1 / math.sqrt(qstate.DIM), dtype=complex))
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")


def state_from_config(
    config: dict, params: Optional[GameParams] = None, delta_prime: Optional[float] = None
) -> StatePreset:
    """Read ``{"amplitudes": [[re, im], ...]}`` or ``{"preset": name, ...}``.

    Explicit amplitudes off normalization by more than 1e-9 are rejected.
    """
    if "amplitudes" in config:
        raw = config["amplitudes"]
        try:
            amps = np.array([complex(re, im) for re, im in raw], dtype=complex)
        except (TypeError, ValueError) as exc:
            raise ValueError("amplitudes must be a list of [re, im] pairs") from exc
        amps = qstate.as_pure_state(amps, atol=qstate.PAYOFF_ATOL)
        return StatePreset(config.get("name", "custom"), amps)
    if "preset" in config:
        dp = config.get("delta_prime", delta_prime)
        return preset(config["preset"], params, dp, config.get("basis", "000"))
    raise ValueError("state config needs an 'amplitudes' or a 'preset' key")


def load_state(
    spec: str, params: Optional[GameParams] = None, delta_prime: Optional[float] = None
) -> StatePreset:
    """Resolve a CLI state argument: a preset name, ``basis:xyz``, or a JSON file."""
    if spec in PRESETS[1:]:
        return preset(spec, params, delta_prime)
    if spec.startswith("basis"):
        _, _, bits = spec.partition(":")
        return preset("basis", basis=bits or "000")
    path = Path(spec)
    try:
        config = json.loads(path.read_text())
    except OSError as exc:
        raise ValueError(f"cannot read state file {spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"state file {spec!r} is not valid JSON: {exc}") from exc
    return state_from_config(config, params, delta_prime)
