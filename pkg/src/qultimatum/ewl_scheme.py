"""Eisert-Wilkens-Lewenstein style quantization of the ultimatum game.

The game starts in the entangled state ``(|000> + i|111>)/sqrt(2)``; each
qubit receives a two-parameter unitary ``U(theta, beta)``; payoffs are read
off the entangled basis ``(|x> + i|not x>)/sqrt(2)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import qstate
from .classical_game import GameParams
from .mw_scheme import payoff_from_weights

PI = math.pi
HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4


@dataclass(frozen=True)
class EWLProfile:
    """``((theta1, beta1), (theta2, beta2, theta3, beta3))`` in radians."""

    theta1: float
    beta1: float
    theta2: float
    beta2: float
    theta3: float
    beta3: float

    def __post_init__(self):
        for name in ("theta1", "beta1", "theta2", "beta2", "theta3", "beta3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for t, b in self.pairs:
            qstate.check_angles(t, b)

    @classmethod
    def from_angles(cls, angles) -> "EWLProfile":
        return cls(*(float(a) for a in angles))

    @property
    def angles(self) -> tuple[float, ...]:
        return (self.theta1, self.beta1, self.theta2, self.beta2, self.theta3, self.beta3)

    @property
    def pairs(self) -> tuple[tuple[float, float], ...]:
        return ((self.theta1, self.beta1), (self.theta2, self.beta2), (self.theta3, self.beta3))

    def with_player1(self, theta1: float, beta1: float) -> "EWLProfile":
        return EWLProfile(theta1, beta1, self.theta2, self.beta2, self.theta3, self.beta3)

    def with_player2(self, theta2, beta2, theta3, beta3) -> "EWLProfile":
        return EWLProfile(self.theta1, self.beta1, theta2, beta2, theta3, beta3)

    def to_dict(self) -> dict:
        return {
            "theta": [self.theta1, self.theta2, self.theta3],
            "beta": [self.beta1, self.beta2, self.beta3],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EWLProfile":
        theta, beta = d["theta"], d["beta"]
        if len(theta) != 3 or len(beta) != 3:
            raise ValueError("profile needs three theta and three beta values")
        return cls(theta[0], beta[0], theta[1], beta[1], theta[2], beta[2])

    @classmethod
    def from_json(cls, text: str) -> "EWLProfile":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class EWLGame:
    params: GameParams


def entangled_basis(x1: int, x2: int, x3: int) -> np.ndarray:
    """``(|x1 x2 x3> + i |~x1 ~x2 ~x3>) / sqrt(2)``."""
    x = qstate.basis_index(x1, x2, x3)
    v = np.zeros(qstate.DIM, dtype=complex)
    v[x] += 1 / math.sqrt(2)
    v[x ^ 0b111] += 1j / math.sqrt(2)
    return v


# columns are the entangled basis vectors in index order
ENTANGLED_BASIS = np.column_stack([entangled_basis(*qstate.index_bits(x)) for x in range(qstate.DIM)])
INITIAL_STATE = entangled_basis(0, 0, 0)


def ewl_final_state(profile: EWLProfile) -> np.ndarray:
    op = qstate.tensor3(*(qstate.u_theta_beta(t, b) for t, b in profile.pairs))
    return qstate.apply(op, INITIAL_STATE)


def numeric_weights(state: np.ndarray) -> tuple[float, float]:
    """Fair and unfair probabilities measured in the entangled basis."""
    probs = np.abs(ENTANGLED_BASIS.conj().T @ state) ** 2
    fair = probs[qstate.basis_index(0, 0, 0)] + probs[qstate.basis_index(0, 0, 1)]
    unfair = probs[qstate.basis_index(1, 0, 0)] + probs[qstate.basis_index(1, 1, 0)]
    return float(fair), float(unfair)


def ewl_payoff_numeric(game: EWLGame, profile: EWLProfile) -> np.ndarray:
    f, u = numeric_weights(ewl_final_state(profile))
    return payoff_from_weights(game.params, f, u)


def closed_form_weights(theta1, beta1, theta2, beta2, theta3, beta3):
    """Coefficients of the fair and unfair payoff vectors.

    Works elementwise on broadcastable arrays, which the deviation search
    relies on.
    """
    c1, s1 = np.cos(theta1 / 2) ** 2, np.sin(theta1 / 2) ** 2
    c2, s2 = np.cos(theta2 / 2) ** 2, np.sin(theta2 / 2) ** 2
    c3, s3 = np.cos(theta3 / 2) ** 2, np.sin(theta3 / 2) ** 2
    fair = c1 * c2 * (c3 + s3 * np.cos(beta3) ** 2) + s1 * s2 * (
        s3 * np.sin(beta1 + beta2 + beta3) ** 2 + c3 * np.sin(beta1 + beta2) ** 2
    )
    unfair = s1 * c3 * (c2 * np.cos(beta1) ** 2 + s2 * np.cos(beta1 + beta2) ** 2) + c1 * s3 * (
        s2 * np.sin(beta2 + beta3) ** 2 + c2 * np.sin(beta3) ** 2
    )
    return fair, unfair


def ewl_payoff_closed(game: EWLGame, profile: EWLProfile) -> np.ndarray:
    f, u = closed_form_weights(*profile.angles)
    return payoff_from_weights(game.params, float(f), float(u))


def payoff_report(game: EWLGame, profile: EWLProfile) -> dict:
    f, u = closed_form_weights(*profile.angles)
    e = payoff_from_weights(game.params, float(f), float(u))
    return {"E1": float(e[0]), "E2": float(e[1]), "fair_weight": float(f), "unfair_weight": float(u)}


def classical_embedding(params: GameParams, p: float, q: float, r: float) -> tuple[np.ndarray, EWLProfile]:
    """Behavioral profile with probabilities ``p`` of ``c0``, ``q`` of ``d0``, ``r`` of ``e0``.

    Returns the expected payoff ``u_f*p*q + u_u*(1-p)*r`` and the beta = 0
    angle profile reproducing it.
    """
    for name, v in (("p", p), ("q", q), ("r", r)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be a probability, got {v!r}")
    expected = p * q * params.fair + (1 - p) * r * params.unfair
    theta = [2 * math.acos(math.sqrt(v)) for v in (p, q, r)]
    return expected, EWLProfile(theta[0], 0.0, theta[1], 0.0, theta[2], 0.0)


def classical_profile(k1: int, k2: int, k3: int) -> EWLProfile:
    """``c_k1, d_k2 e_k3`` as ``theta in {0, pi}``, ``beta = 0``."""
    return EWLProfile(PI * k1, 0.0, PI * k2, 0.0, PI * k3, 0.0)


def in_subset1(profile: EWLProfile, atol: float = qstate.ATOL) -> bool:
    """All thetas are pi, ``beta2 + beta3 <= pi/4`` and the betas sum to pi/2."""
    p = profile
    return (
        all(abs(t - PI) <= atol for t in (p.theta1, p.theta2, p.theta3))
        and p.beta2 + p.beta3 <= QUARTER_PI + atol
        and abs(p.beta1 + p.beta2 + p.beta3 - HALF_PI) <= atol
    )


def in_subset2(profile: EWLProfile, atol: float = qstate.ATOL) -> bool:
    """``theta1 = theta2 = 0``, ``theta3 = pi``, ``beta3 = 0``; beta1, beta2 free."""
    p = profile
    return abs(p.theta1) <= atol and abs(p.theta2) <= atol and abs(p.theta3 - PI) <= atol and abs(p.beta3) <= atol


def sample_subset1(rng: np.random.Generator) -> EWLProfile:
    # uniform on the triangle beta2, beta3 >= 0, beta2 + beta3 <= pi/4
    u, v = rng.uniform(size=2)
    if u + v > 1:
        u, v = 1 - u, 1 - v
    b2, b3 = QUARTER_PI * u, QUARTER_PI * v
    return EWLProfile(PI, HALF_PI - b2 - b3, PI, b2, PI, b3)


def sample_subset2(rng: np.random.Generator) -> EWLProfile:
    b1, b2 = rng.uniform(0, HALF_PI, size=2)
    return EWLProfile(0.0, b1, 0.0, b2, PI, 0.0)


def best_response_p1_family(beta2: float, beta3: float) -> tuple[float, float]:
    """Player 1's best reply to ``(pi, beta2, pi, beta3)`` when ``beta2 + beta3 <= pi/4``."""
    if beta2 < 0 or beta3 < 0 or beta2 + beta3 > QUARTER_PI + qstate.ATOL:
        raise ValueError(f"need beta2, beta3 >= 0 and beta2 + beta3 <= pi/4, got {beta2!r}, {beta3!r}")
    return PI, max(HALF_PI - beta2 - beta3, 0.0)


def behavioral_mixed_interval(params: GameParams) -> tuple[float, float]:
    """Range of ``theta`` in ``U(0,0) (x) U(theta,0)`` listed for the mixed
    fair-split equilibria: ``[2 arccos(1/sqrt(2 delta)), pi/2]``.

    The lower end makes player 1 indifferent; any theta above it keeps her at
    ``c0``. The upper end is kept at pi/2 as published although the Nash
    condition alone admits theta up to pi.
    """
    return 2 * math.acos(1 / math.sqrt(2 * params.delta)), HALF_PI
