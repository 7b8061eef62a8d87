"""Exact two-qubit state representation and Born-rule probabilities.

States are pure two-qubit states in Schmidt form,
cos(beta)|00> + e^{i gamma} sin(beta)|11>, in the product basis ordered
{|00>, |01>, |10>, |11>} with side A as the left tensor factor.  Spin
observables are unit Bloch directions; their eigenprojectors are
(I +/- n.sigma)/2.  Joint outcome probabilities come from the Born rule
Tr[rho (Pi_A x Pi_B)] evaluated with explicit 4x4 matrices.

This matrix path deliberately avoids every trigonometric shortcut used by
the closed forms elsewhere in the package, so it can serve as an
independent oracle against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "DomainError",
    "NumericalConsistencyError",
    "Outcome",
    "SchmidtState",
    "Direction",
    "ComplexMatrix",
    "OUTCOME_PAIRS",
    "IDENTITY_2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "density_matrix",
    "density_matrix_pauli",
    "projector",
    "joint_probability_oracle",
    "outcome_distribution",
    "is_hermitian",
    "is_projector_matrix",
    "is_density_matrix",
]

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# A 2x2 or 4x4 complex ndarray; validated by the predicates below rather
# than wrapped in a class.
ComplexMatrix = np.ndarray


class DomainError(ValueError):
    """Raised when an input lies outside the physical domain of an operation."""


class NumericalConsistencyError(RuntimeError):
    """Raised when an internal cross-check of two computation paths fails."""


class Outcome(IntEnum):
    """Measurement outcome of a spin observable with eigenvalues +1 and -1."""

    PLUS = +1
    MINUS = -1


def _as_outcome(value: int) -> int:
    v = int(value)
    if v not in (+1, -1):
        raise DomainError(f"outcome must be +1 or -1, got {value!r}")
    return v


@dataclass(frozen=True)
class SchmidtState:
    """Two-qubit pure state cos(beta)|00> + e^{i gamma} sin(beta)|11>.

    beta is restricted to [0, pi/2] so both Schmidt coefficients are
    nonnegative; gamma is stored reduced modulo 2*pi.
    """

    beta: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.beta <= HALF_PI):
            raise DomainError(f"beta must lie in [0, pi/2], got {self.beta!r}")
        if not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite, got {self.gamma!r}")
        object.__setattr__(self, "gamma", self.gamma % TWO_PI)

    def is_product(self, tol: float = 1e-12) -> bool:
        return self.beta <= tol or HALF_PI - self.beta <= tol

    def is_maximal(self, tol: float = 1e-12) -> bool:
        return abs(self.beta - 0.25 * math.pi) <= tol

    @property
    def cos_beta(self) -> float:
        return math.cos(self.beta)

    @property
    def sin_beta(self) -> float:
        return math.sin(self.beta)

    def state_vector(self) -> np.ndarray:
        v = np.zeros(4, dtype=complex)
        v[0] = self.cos_beta
        v[3] = self.sin_beta * complex(math.cos(self.gamma), math.sin(self.gamma))
        return v


@dataclass(frozen=True)
class Direction:
    """Measurement direction on the Bloch sphere, polar theta and azimuth phi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}")
        object.__setattr__(self, "phi", self.phi % TWO_PI)

    def bloch_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )


def _const(matrix: list) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    m.setflags(write=False)
    return m


IDENTITY_2 = _const([[1, 0], [0, 1]])
SIGMA_X = _const([[0, 1], [1, 0]])
SIGMA_Y = _const([[0, -1j], [1j, 0]])
SIGMA_Z = _const([[1, 0], [0, -1]])

# Fixed ordering of the four outcome pairs used by distributions and samplers.
OUTCOME_PAIRS: tuple[tuple[int, int], ...] = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))

# Two-qubit Pauli products, precomputed once for the expansion cross-check.
_KRON_II = _const(np.kron(IDENTITY_2, IDENTITY_2))
_KRON_IZ = _const(np.kron(IDENTITY_2, SIGMA_Z))
_KRON_ZI = _const(np.kron(SIGMA_Z, IDENTITY_2))
_KRON_XX = _const(np.kron(SIGMA_X, SIGMA_X))
_KRON_XY = _const(np.kron(SIGMA_X, SIGMA_Y))
_KRON_YX = _const(np.kron(SIGMA_Y, SIGMA_X))
_KRON_YY = _const(np.kron(SIGMA_Y, SIGMA_Y))
_KRON_ZZ = _const(np.kron(SIGMA_Z, SIGMA_Z))


def density_matrix_pauli(state: SchmidtState) -> ComplexMatrix:
    """Density matrix assembled from its two-qubit Pauli expansion.

    Kept as a second, independent construction; density_matrix checks the
    outer-product form against it on every call.
    """
    c, s = state.cos_beta, state.sin_beta
    zz = c * c - s * s
    xx = 2.0 * c * s * math.cos(state.gamma)
    xy = 2.0 * c * s * math.sin(state.gamma)
    rho = 0.25 * (
        _KRON_II
        + zz * (_KRON_IZ + _KRON_ZI)
        + xx * _KRON_XX
        + xy * (_KRON_XY + _KRON_YX)
        - xx * _KRON_YY
        + _KRON_ZZ
    )
    return rho


def density_matrix(state: SchmidtState) -> ComplexMatrix:
    """4x4 density matrix |psi><psi| of a Schmidt-form state.

    The outer product is authoritative; the Pauli expansion must agree with
    it entrywise within 1e-14 or a NumericalConsistencyError is raised.
    """
    v = state.state_vector()
    rho = np.outer(v, v.conj())
    expansion = density_matrix_pauli(state)
    if not np.allclose(rho, expansion, rtol=0.0, atol=1e-14):
        raise NumericalConsistencyError(
            "outer-product and Pauli-expansion density matrices disagree"
        )
    return rho


def projector(direction: Direction, outcome: int) -> ComplexMatrix:
    """Eigenprojector (I + outcome * n.sigma)/2 for a Bloch direction."""
    o = _as_outcome(outcome)
    ct, st = math.cos(direction.theta), math.sin(direction.theta)
    ph = complex(math.cos(direction.phi), math.sin(direction.phi))
    n_sigma = np.array([[ct, st * ph.conjugate()], [st * ph, -ct]], dtype=complex)
    return 0.5 * (IDENTITY_2 + o * n_sigma)


def _born_probability(rho: ComplexMatrix, op: ComplexMatrix) -> float:
    raw = complex(np.einsum("ij,ji->", rho, op))
    if abs(raw.imag) > 1e-10:
        raise NumericalConsistencyError(
            f"Born-rule trace has imaginary part {raw.imag:.3e}"
        )
    p = raw.real
    if p < -1e-10 or p > 1.0 + 1e-10:
        raise NumericalConsistencyError(f"Born-rule trace {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def joint_probability_oracle(
    state: SchmidtState,
    dir_a: Direction,
    out_a: int,
    dir_b: Direction,
    out_b: int,
) -> float:
    """Joint outcome probability Tr[rho (Pi_A x Pi_B)] by explicit matrices."""
    rho = density_matrix(state)
    op = np.kron(projector(dir_a, out_a), projector(dir_b, out_b))
    return _born_probability(rho, op)


def outcome_distribution(
    state: SchmidtState, dir_a: Direction, dir_b: Direction
) -> np.ndarray:
    """The four joint outcome probabilities, ordered as OUTCOME_PAIRS.

    The distribution must sum to 1 within 1e-12.
    """
    rho = density_matrix(state)
    pa = {o: projector(dir_a, o) for o in (+1, -1)}
    pb = {o: projector(dir_b, o) for o in (+1, -1)}
    probs = np.array(
        [_born_probability(rho, np.kron(pa[a], pb[b])) for a, b in OUTCOME_PAIRS]
    )
    if abs(probs.sum() - 1.0) > 1e-12:
        raise NumericalConsistencyError(
            f"outcome distribution sums to {probs.sum()!r}, expected 1"
        )
    return probs


def is_hermitian(matrix: ComplexMatrix, tol: float = 1e-14) -> bool:
    m = np.asarray(matrix)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(
        np.max(np.abs(m - m.conj().T)) <= tol
    )


def is_projector_matrix(matrix: ComplexMatrix, tol: float = 1e-14) -> bool:
    """Hermitian and idempotent within tol."""
    if not is_hermitian(matrix, tol):
        return False
    m = np.asarray(matrix)
    return bool(np.max(np.abs(m @ m - m)) <= tol)


def is_density_matrix(matrix: ComplexMatrix, tol: float = 1e-14) -> bool:
    """Hermitian, unit trace within tol, and eigenvalues >= -1e-12."""
    if not is_hermitian(matrix, tol):
        return False
    m = np.asarray(matrix)
    if abs(np.trace(m).real - 1.0) > tol:
        return False
    return bool(np.min(np.linalg.eigvalsh(m)) >= -1e-12)
