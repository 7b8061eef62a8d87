"""Closed-form probabilities and constructions for the four-observable argument.

The argument uses two observables per side, F and D on particle A, G and E
on particle B, and the four joint probabilities

    q1 = P(F=+1, G=+1),   q2 = P(D=+1, G=-1),
    q3 = P(F=-1, E=+1),   q4 = P(D=+1, E=+1).

Local realism forces q4 <= q1 + q2 + q3 (see the lhv module), so settings
with q2 = q3 = 0, q1 > 0 and q4 > q1 witness nonlocality.  This module
provides the closed-form q's for Schmidt-form states, the solver that
zeroes q2 and q3 exactly, an explicit witness for every entangled
non-maximal state, and the verifier showing the maximally entangled state
admits no such witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantum_core import (
    TWO_PI,
    Direction,
    DomainError,
    NumericalConsistencyError,
    SchmidtState,
)

__all__ = [
    "Settings",
    "CabelloProbs",
    "ConditionVerdict",
    "ConstraintSolution",
    "NogoReport",
    "NogoSweepReport",
    "closed_form_joint",
    "cabello_probs",
    "check_conditions",
    "solve_constraints",
    "witness_settings",
    "nogo_verify",
    "nogo_sweep",
]


@dataclass(frozen=True)
class Settings:
    """The four measurement directions: f, d on side A; g, e on side B."""

    f: Direction
    d: Direction
    g: Direction
    e: Direction


@dataclass(frozen=True)
class CabelloProbs:
    """The quadruple of joint probabilities used by the argument."""

    q1: float
    q2: float
    q3: float
    q4: float

    @property
    def gap(self) -> float:
        return self.q4 - self.q1


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of checking the four argument conditions on a quadruple."""

    holds: bool
    failures: tuple[str, ...] = ()

    @property
    def reason(self) -> str | None:
        return None if self.holds else "; ".join(self.failures)


@dataclass(frozen=True)
class ConstraintSolution:
    """Settings with q2 and q3 zeroed, plus the choices that fixed the gauge.

    branch is the sign of cos(phi_d + phi_e - gamma); free_phase is the
    phi_d value used to fix the one-parameter phase freedom.  notes records
    degenerate inputs for which a phase relation was vacuous and kept only
    by convention.
    """

    settings: Settings
    branch: int
    free_phase: float
    notes: tuple[str, ...] = ()


def closed_form_joint(
    state: SchmidtState,
    dir_a: Direction,
    out_a: int,
    dir_b: Direction,
    out_b: int,
) -> float:
    """Joint outcome probability from the closed trigonometric form.

    Writing the +1 eigenvector of a direction as
    (cos(theta/2), e^{i phi} sin(theta/2)) and the -1 eigenvector as
    (sin(theta/2), -e^{i phi} cos(theta/2)), the squared overlap with the
    Schmidt state collapses to three real terms; the azimuths survive only
    through cos(phi_a + phi_b - gamma).
    """
    ca, sa = math.cos(dir_a.theta / 2.0), math.sin(dir_a.theta / 2.0)
    cb, sb = math.cos(dir_b.theta / 2.0), math.sin(dir_b.theta / 2.0)
    a0, a1 = (ca, sa) if int(out_a) == +1 else (sa, -ca)
    b0, b1 = (cb, sb) if int(out_b) == +1 else (sb, -cb)
    c, s = state.cos_beta, state.sin_beta
    cross = math.cos(dir_a.phi + dir_b.phi - state.gamma)
    p = (c * a0 * b0) ** 2 + (s * a1 * b1) ** 2 + 2.0 * c * s * a0 * a1 * b0 * b1 * cross
    if p < -1e-10 or p > 1.0 + 1e-10:
        raise NumericalConsistencyError(f"closed-form probability {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def cabello_probs(state: SchmidtState, settings: Settings) -> CabelloProbs:
    """The four joint probabilities (q1, q2, q3, q4) for given settings."""
    return CabelloProbs(
        q1=closed_form_joint(state, settings.f, +1, settings.g, +1),
        q2=closed_form_joint(state, settings.d, +1, settings.g, -1),
        q3=closed_form_joint(state, settings.f, -1, settings.e, +1),
        q4=closed_form_joint(state, settings.d, +1, settings.e, +1),
    )


def check_conditions(
    probs: CabelloProbs,
    tol: float | None = None,
    *,
    zero_tol: float = 1e-12,
    pos_tol: float = 1e-9,
) -> ConditionVerdict:
    """Check q2 = q3 = 0, q1 > 0 and q4 > q1 up to tolerances.

    The two zero clauses use zero_tol and the two strict-positivity clauses
    use pos_tol; passing tol sets both.  Requiring q1 > 0 is what separates
    this argument from the q1 = 0 variant.
    """
    if tol is not None:
        if tol <= 0.0:
            raise DomainError(f"tol must be positive, got {tol!r}")
        zero_tol = pos_tol = tol
    failures = []
    if probs.q2 > zero_tol:
        failures.append("q2 nonzero")
    if probs.q3 > zero_tol:
        failures.append("q3 nonzero")
    if not probs.q1 > pos_tol:
        failures.append("q1 not positive")
    if not probs.q4 - probs.q1 > pos_tol:
        failures.append("gap not positive")
    return ConditionVerdict(holds=not failures, failures=tuple(failures))


def _check_entangled(state: SchmidtState) -> None:
    if state.is_product():
        raise DomainError(
            f"beta = {state.beta!r} is a product state; the zero constraints "
            "cannot be satisfied with a positive gap"
        )


def _check_half_open_theta(name: str, theta: float) -> None:
    if not (0.0 <= theta < math.pi):
        raise DomainError(
            f"{name} must lie in [0, pi) (the half-angle tangent relation is "
            f"singular at pi), got {theta!r}"
        )


def solve_constraints(
    state: SchmidtState,
    theta_d: float,
    theta_e: float,
    branch: int = -1,
    free_phase: float = 0.0,
) -> ConstraintSolution:
    """Settings with q2 = q3 = 0 for free polar angles theta_d, theta_e.

    Zeroing q2 ties g to d through tan(theta_g/2) = tan(beta) tan(theta_d/2)
    together with phi_d + phi_g = gamma; zeroing q3 ties f to e the same
    way.  One overall phase remains free and is fixed by phi_d = free_phase;
    branch chooses the sign of cos(phi_d + phi_e - gamma), the only phase
    combination the gap still depends on.
    """
    _check_entangled(state)
    _check_half_open_theta("theta_d", theta_d)
    _check_half_open_theta("theta_e", theta_e)
    if branch not in (-1, +1):
        raise DomainError(f"branch must be -1 or +1, got {branch!r}")

    tan_beta = math.tan(state.beta)
    theta_g = 2.0 * math.atan(tan_beta * math.tan(theta_d / 2.0))
    theta_f = 2.0 * math.atan(tan_beta * math.tan(theta_e / 2.0))

    notes = []
    if theta_d == 0.0:
        notes.append(
            "theta_d = 0: q2 vanishes for every phase; phi_g kept by convention"
        )
    if theta_e == 0.0:
        notes.append(
            "theta_e = 0: q3 vanishes for every phase; phi_f kept by convention"
        )

    phi_d = free_phase % TWO_PI
    phi_g = (state.gamma - phi_d) % TWO_PI
    offset = 0.0 if branch == +1 else math.pi
    phi_e = (state.gamma - phi_d + offset) % TWO_PI
    phi_f = (state.gamma - phi_e) % TWO_PI

    settings = Settings(
        f=Direction(theta_f, phi_f),
        d=Direction(theta_d, phi_d),
        g=Direction(theta_g, phi_g),
        e=Direction(theta_e, phi_e),
    )
    probs = cabello_probs(state, settings)
    if probs.q2 > 1e-12 or probs.q3 > 1e-12:
        raise NumericalConsistencyError(
            f"constraint solution left q2 = {probs.q2!r}, q3 = {probs.q3!r}"
        )
    return ConstraintSolution(
        settings=settings, branch=branch, free_phase=phi_d, notes=tuple(notes)
    )


def witness_settings(
    state: SchmidtState,
    theta_e: float | None = None,
    theta_f: float | None = None,
) -> Settings:
    """Explicit settings witnessing nonlocality for a non-maximal entangled state.

    For tan(beta) > 1 the d and g directions are pinned to theta = 0, for
    tan(beta) < 1 to theta = pi; either boundary zeroes q2 outright.  The
    pair (theta_e, theta_f) must satisfy the q3 = 0 link
    tan(theta_f/2) = tan(beta) tan(theta_e/2); by default theta_e = pi/2 and
    theta_f is derived from the link.  Phases follow the branch with
    cos(phi_d + phi_e - gamma) = -1 and free phase 0.
    """
    _check_entangled(state)
    if state.is_maximal():
        raise DomainError(
            "beta = pi/4: the maximally entangled state admits no witness "
            "(q4 = q1 whenever q2 = q3 = 0)"
        )
    tan_beta = math.tan(state.beta)
    if theta_e is None:
        theta_e = 0.5 * math.pi
    if not (0.0 < theta_e < math.pi):
        raise DomainError(f"theta_e must lie in (0, pi), got {theta_e!r}")
    linked = 2.0 * math.atan(tan_beta * math.tan(theta_e / 2.0))
    if theta_f is None:
        theta_f = linked
    elif abs(math.tan(theta_f / 2.0) - tan_beta * math.tan(theta_e / 2.0)) > 1e-9 * (
        1.0 + abs(tan_beta * math.tan(theta_e / 2.0))
    ):
        raise DomainError(
            f"theta_f = {theta_f!r} violates the q3 = 0 link; expected {linked!r}"
        )

    if tan_beta > 1.0:
        if not math.cos(theta_e / 2.0) > math.cos(theta_f / 2.0):
            raise DomainError(
                "tan(beta) > 1 witness needs cos(theta_e/2) > cos(theta_f/2)"
            )
        theta_dg = 0.0
    else:
        if not math.sin(theta_e / 2.0) > math.sin(theta_f / 2.0):
            raise DomainError(
                "tan(beta) < 1 witness needs sin(theta_e/2) > sin(theta_f/2)"
            )
        theta_dg = math.pi

    gamma = state.gamma
    phi_d = 0.0
    phi_g = gamma % TWO_PI
    phi_e = (gamma + math.pi) % TWO_PI
    phi_f = (gamma - phi_e) % TWO_PI
    return Settings(
        f=Direction(theta_f, phi_f),
        d=Direction(theta_dg, phi_d),
        g=Direction(theta_dg, phi_g),
        e=Direction(theta_e, phi_e),
    )


@dataclass(frozen=True)
class NogoReport:
    """q1, q4 and their gap for one admissible maximally entangled setting."""

    q1: float
    q4: float
    gap: float
    probs: CabelloProbs
    settings: Settings


def nogo_verify(
    gamma: float,
    theta_d: float,
    theta_e: float,
    phi_d: float = 0.0,
    phi_e: float = 0.0,
) -> NogoReport:
    """Evaluate q1 and q4 at beta = pi/4 for constraint-satisfying settings.

    At maximal entanglement the zero constraints force theta_g = theta_d and
    theta_f = theta_e with phi_g = gamma - phi_d and phi_f = gamma - phi_e,
    leaving both phi_d and phi_e free.  The two surviving phase cosines then
    coincide, so q4 = q1 for every admissible choice.
    """
    for name, theta in (("theta_d", theta_d), ("theta_e", theta_e)):
        if not (0.0 <= theta <= math.pi):
            raise DomainError(f"{name} must lie in [0, pi], got {theta!r}")
    state = SchmidtState(beta=0.25 * math.pi, gamma=gamma)
    phi_g = (state.gamma - phi_d) % TWO_PI
    phi_f = (state.gamma - phi_e) % TWO_PI
    settings = Settings(
        f=Direction(theta_e, phi_f),
        d=Direction(theta_d, phi_d % TWO_PI),
        g=Direction(theta_d, phi_g),
        e=Direction(theta_e, phi_e % TWO_PI),
    )
    probs = cabello_probs(state, settings)
    return NogoReport(
        q1=probs.q1, q4=probs.q4, gap=probs.q4 - probs.q1, probs=probs, settings=settings
    )


@dataclass(frozen=True)
class NogoSweepReport:
    """Worst-case |q4 - q1| over randomized admissible maximal-state settings."""

    trials: int
    seed: int
    tolerance: float
    max_abs_gap: float
    max_q2: float
    max_q3: float

    @property
    def all_within(self) -> bool:
        return self.max_abs_gap <= self.tolerance


def nogo_sweep(trials: int = 10_000, seed: int = 0, tolerance: float = 1e-12) -> NogoSweepReport:
    """Randomized sweep of admissible settings at beta = pi/4."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials!r}")
    rng = np.random.default_rng(seed)
    draws = rng.random((trials, 5))
    max_abs_gap = 0.0
    max_q2 = 0.0
    max_q3 = 0.0
    for row in draws:
        report = nogo_verify(
            gamma=TWO_PI * row[0],
            theta_d=math.pi * row[1],
            theta_e=math.pi * row[2],
            phi_d=TWO_PI * row[3],
            phi_e=TWO_PI * row[4],
        )
        max_abs_gap = max(max_abs_gap, abs(report.gap))
        max_q2 = max(max_q2, report.probs.q2)
        max_q3 = max(max_q3, report.probs.q3)
    return NogoSweepReport(
        trials=trials,
        seed=seed,
        tolerance=tolerance,
        max_abs_gap=max_abs_gap,
        max_q2=max_q2,
        max_q3=max_q3,
    )
