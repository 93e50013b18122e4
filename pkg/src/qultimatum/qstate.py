"""Dense three-qubit states, density matrices and single-qubit operators.

Basis index convention: ``x = 4*x1 + 2*x2 + x3`` (qubit 1 is the most
significant bit). States are plain complex ``numpy`` arrays of length 8,
density matrices and operators are 8x8 complex arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

NQUBITS = 3
DIM = 2**NQUBITS

# tolerance for algebraic identities (unitarity, norms, traces)
ATOL = 1e-12
# tolerance for payoff comparisons and user-supplied amplitudes
PAYOFF_ATOL = 1e-9

_IDENTITY2 = np.eye(2, dtype=complex)


def basis_index(x1: int, x2: int, x3: int) -> int:
    """Decimal index of the computational basis state ``|x1 x2 x3>``."""
    for bit in (x1, x2, x3):
        if bit not in (0, 1):
            raise ValueError(f"basis bits must be 0 or 1, got {(x1, x2, x3)}")
    return 4 * x1 + 2 * x2 + x3


def index_bits(x: int) -> tuple[int, int, int]:
    if not 0 <= x < DIM:
        raise ValueError(f"basis index out of range: {x}")
    return (x >> 2) & 1, (x >> 1) & 1, x & 1


def basis_state(x: int) -> np.ndarray:
    """Return ``|x>`` as an amplitude vector."""
    index_bits(x)
    v = np.zeros(DIM, dtype=complex)
    v[x] = 1.0
    return v


def as_pure_state(amplitudes: Sequence[complex] | np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Validate and copy an 8-amplitude vector.

    Raises ``ValueError`` when the vector has the wrong length, contains
    non-finite entries, or is not normalized within ``atol``.
    """
    v = np.array(amplitudes, dtype=complex).reshape(-1)
    if v.shape != (DIM,):
        raise ValueError(f"expected {DIM} amplitudes, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("amplitudes must be finite")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > atol:
        raise ValueError(f"state is not normalized: sum |amplitude|^2 = {norm2!r}")
    return v


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    v = rng.normal(size=DIM) + 1j * rng.normal(size=DIM)
    return v / np.linalg.norm(v)


def pauli(index: int) -> np.ndarray:
    """Identity for ``0``, bit flip for ``1``."""
    if index == 0:
        return np.array([[1, 0], [0, 1]], dtype=complex)
    if index == 1:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    raise ValueError(f"pauli index must be 0 or 1, got {index!r}")


def check_angles(theta: float, beta: float) -> None:
    if not (-ATOL <= theta <= math.pi + ATOL):
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if not (-ATOL <= beta <= math.pi / 2 + ATOL):
        raise ValueError(f"beta must lie in [0, pi/2], got {beta!r}")


def u_theta_beta(theta: float, beta: float) -> np.ndarray:
    """Two-parameter unitary strategy.

    ``[[cos(t/2), i e^{ib} sin(t/2)], [i e^{-ib} sin(t/2), cos(t/2)]]``
    with ``t`` in ``[0, pi]`` and ``b`` in ``[0, pi/2]``.
    """
    check_angles(theta, beta)
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return np.array(
        [[c, 1j * np.exp(1j * beta) * s], [1j * np.exp(-1j * beta) * s, c]],
        dtype=complex,
    )


def tensor3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """``a (x) b (x) c`` with qubit 1 most significant."""
    return np.kron(np.kron(a, b), c)


def on_qubit(op: np.ndarray, qubit: int) -> np.ndarray:
    """Lift a single-qubit operator to act on ``qubit`` (1, 2 or 3)."""
    ops = [_IDENTITY2, _IDENTITY2, _IDENTITY2]
    if qubit not in (1, 2, 3):
        raise ValueError(f"qubit must be 1, 2 or 3, got {qubit!r}")
    ops[qubit - 1] = op
    return tensor3(*ops)


def is_unitary(op: np.ndarray, atol: float = ATOL) -> bool:
    n = op.shape[0]
    return bool(np.allclose(op.conj().T @ op, np.eye(n), rtol=0, atol=atol))


def apply(op: np.ndarray, state: np.ndarray) -> np.ndarray:
    return op @ state


def to_density(state: np.ndarray) -> np.ndarray:
    """``|psi><psi|``."""
    return np.outer(state, state.conj())


def conjugate_density(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``op rho op^dagger``."""
    return op @ rho @ op.conj().T


def is_density_matrix(rho: np.ndarray, atol: float = ATOL) -> bool:
    if rho.shape != (DIM, DIM):
        return False
    if not np.allclose(rho, rho.conj().T, rtol=0, atol=atol):
        return False
    if abs(np.trace(rho).real - 1.0) > atol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -1e-10)


def first_qubit_projector(outcome: int) -> np.ndarray:
    """``M_outcome = |outcome><outcome| (x) I (x) I``."""
    if outcome not in (0, 1):
        raise ValueError(f"measurement outcome must be 0 or 1, got {outcome!r}")
    p = np.zeros((2, 2), dtype=complex)
    p[outcome, outcome] = 1.0
    return on_qubit(p, 1)


@dataclass(frozen=True)
class Branch:
    """One outcome of a projective measurement.

    ``state`` is the normalized post-measurement density matrix, or ``None``
    when the outcome has zero probability (an empty branch).
    """

    outcome: int
    probability: float
    state: Optional[np.ndarray]

    @property
    def empty(self) -> bool:
        return self.state is None

    def unnormalized(self) -> np.ndarray:
        """``M rho M``, i.e. probability times the post-state."""
        if self.state is None:
            return np.zeros((DIM, DIM), dtype=complex)
        return self.probability * self.state


def measure_first_qubit(rho: np.ndarray, atol: float = ATOL) -> tuple[Branch, Branch]:
    """Computational-basis measurement of qubit 1.

    Branches whose probability is at most ``atol`` are returned empty rather
    than normalized by a vanishing trace.
    """
    branches = []
    for outcome in (0, 1):
        m = first_qubit_projector(outcome)
        piece = m @ rho @ m
        p = float(np.trace(piece).real)
        if p <= atol:
            branches.append(Branch(outcome, 0.0, None))
        else:
            branches.append(Branch(outcome, p, piece / p))
    return branches[0], branches[1]
