"""Maximization of the success gap q4 - q1 over constraint-satisfying settings.

With q2 = q3 = 0 solved exactly (see cabello_engine), the gap becomes a
smooth function of the two free polar angles (theta_d, theta_e) and the
sign s = cos(phi_d + phi_e - gamma) = +/-1.  Writing T = tan(beta),
x = tan(theta_d/2), y = tan(theta_e/2),

    gap = cos^2(beta) [ (1 - T x y)^2 / ((1+x^2)(1+y^2))
                        - (1 - T^3 x y)^2 / ((1+T^2 x^2)(1+T^2 y^2)) ]

for s = -1; the s = +1 objective is the same expression with y negated, so
its optima sit at theta_d = -theta_e and carry the same value.  This module
provides the objective, its analytic gradient in factored form (whose two
factors are the stationarity conditions: the spurious family
T tan(theta_e/2) = -tan(theta_d/2) and the cross-multiplied bracket
equation), a deterministic grid + golden-section maximizer, the
constrained q1 = 0 comparison maximum, and a sweep over states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .cabello_engine import cabello_probs, solve_constraints
from .quantum_core import DomainError, SchmidtState

__all__ = [
    "GapObjective",
    "OptimumRecord",
    "HardyOptimum",
    "gap_general",
    "gap_symmetric",
    "gap_gradient",
    "gap_gradient_fd",
    "stationarity_residual",
    "maximize_gap",
    "hardy_max",
    "hardy_max_brute",
    "hardy_global_max",
    "sweep",
]

QUARTER_PI = 0.25 * math.pi
HALF_PI = 0.5 * math.pi
_SQRT_HALF = math.sqrt(0.5)
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# Search directions for the alternating golden-section refinement: the two
# coordinates plus both diagonals, because the objective's Hessian at a
# symmetric optimum has its eigenvectors along the diagonals.
_REFINE_DIRECTIONS = (
    (1.0, 0.0),
    (0.0, 1.0),
    (_SQRT_HALF, _SQRT_HALF),
    (_SQRT_HALF, -_SQRT_HALF),
)


def _check_beta_interior(beta: float) -> None:
    if not (0.0 < beta < HALF_PI):
        raise DomainError(f"beta must lie strictly inside (0, pi/2), got {beta!r}")


def _check_branch(branch: int) -> None:
    if branch not in (-1, +1):
        raise DomainError(f"branch must be -1 or +1, got {branch!r}")


def _check_signed_theta(name: str, theta: float) -> None:
    if not (-math.pi < theta < math.pi):
        raise DomainError(f"{name} must lie in (-pi, pi), got {theta!r}")


def gap_general(beta: float, theta_d: float, theta_e: float, phase_cos: float) -> float:
    """The gap q4 - q1 under the zero constraints, for any surviving phase.

    phase_cos is cos(phi_d + phi_e - gamma) and may take any value in
    [-1, 1]; the angles may be signed, a negative theta standing for the
    same polar angle with its azimuth advanced by pi.
    """
    _check_beta_interior(beta)
    _check_signed_theta("theta_d", theta_d)
    _check_signed_theta("theta_e", theta_e)
    if not -1.0 <= phase_cos <= 1.0:
        raise DomainError(f"phase_cos must lie in [-1, 1], got {phase_cos!r}")
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    x = math.tan(0.5 * theta_d)
    y = math.tan(0.5 * theta_e)
    k2 = 1.0 / ((1.0 + x * x) * (1.0 + y * y))
    k1 = 1.0 / ((1.0 + T * T * x * x) * (1.0 + T * T * y * y))
    return c2 * (
        (k2 - k1)
        + T * T * x * x * y * y * (k2 - k1 * T**4)
        + 2.0 * phase_cos * T * x * y * (k2 - k1 * T * T)
    )


def gap_symmetric(beta: float, theta: float) -> float:
    """The gap on the symmetric line theta_d = theta_e with phase cosine -1."""
    _check_beta_interior(beta)
    _check_signed_theta("theta", theta)
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    t2 = math.tan(0.5 * theta) ** 2
    a = (1.0 - T * t2) / (1.0 + t2)
    b = (1.0 - T**3 * t2) / (1.0 + T * T * t2)
    return c2 * (a * a - b * b)


def _gradient_minus(beta: float, theta_d: float, theta_e: float) -> tuple[float, float]:
    # Factored derivative of the phase -1 objective.  Each component is the
    # product of the linear factor (T*other + own) with the bracket whose
    # cross-multiplied zero set is the main stationarity equation.
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    x = math.tan(0.5 * theta_d)
    y = math.tan(0.5 * theta_e)
    ax = 1.0 + x * x
    ay = 1.0 + y * y
    bx = 1.0 + T * T * x * x
    by = 1.0 + T * T * y * y
    n1 = 1.0 - T * x * y
    n2 = 1.0 - T**3 * x * y
    bracket_d = n1 / (ax * ax * ay) - T * T * n2 / (bx * bx * by)
    bracket_e = n1 / (ay * ay * ax) - T * T * n2 / (by * by * bx)
    gd = -c2 * (T * y + x) * ax * bracket_d
    ge = -c2 * (T * x + y) * ay * bracket_e
    return gd, ge


def gap_gradient(
    beta: float, theta_d: float, theta_e: float, branch: int = -1
) -> tuple[float, float]:
    """Analytic gradient of the gap with respect to (theta_d, theta_e)."""
    _check_beta_interior(beta)
    _check_branch(branch)
    _check_signed_theta("theta_d", theta_d)
    _check_signed_theta("theta_e", theta_e)
    if branch == +1:
        gd, ge = _gradient_minus(beta, theta_d, -theta_e)
        return gd, -ge
    return _gradient_minus(beta, theta_d, theta_e)


def gap_gradient_fd(
    beta: float,
    theta_d: float,
    theta_e: float,
    branch: int = -1,
    step: float = 1e-6,
) -> tuple[float, float]:
    """Central finite-difference gradient of the gap at an interior point."""
    _check_branch(branch)
    phase = float(branch)
    gd = (
        gap_general(beta, theta_d + step, theta_e, phase)
        - gap_general(beta, theta_d - step, theta_e, phase)
    ) / (2.0 * step)
    ge = (
        gap_general(beta, theta_d, theta_e + step, phase)
        - gap_general(beta, theta_d, theta_e - step, phase)
    ) / (2.0 * step)
    return gd, ge


def stationarity_residual(
    beta: float, theta_d: float, theta_e: float, branch: int = -1
) -> float:
    """Largest gradient magnitude from the factored analytic forms and from
    central finite differences (step 1e-6).

    The analytic factors are necessary conditions only (one factor family is
    spurious), so this residual certifies stationarity, not optimality.
    """
    analytic = gap_gradient(beta, theta_d, theta_e, branch)
    numeric = gap_gradient_fd(beta, theta_d, theta_e, branch)
    return max(abs(v) for v in (*analytic, *numeric))


@dataclass(frozen=True)
class GapObjective:
    """The gap as a function of the two free polar angles, at fixed branch."""

    beta: float
    branch: int = -1

    def __post_init__(self) -> None:
        _check_beta_interior(self.beta)
        _check_branch(self.branch)

    def value(self, theta_d: float, theta_e: float) -> float:
        return gap_general(self.beta, theta_d, theta_e, float(self.branch))

    __call__ = value


@dataclass(frozen=True)
class OptimumRecord:
    """Per-state maximization result with its diagnostics."""

    beta: float
    theta_d_star: float
    theta_e_star: float
    gap_star: float
    q1_star: float
    q4_star: float
    hardy_star: float
    stationarity_residual: float
    branch: int
    symmetric_optimum: bool


def _golden_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Golden-section maximization of a unimodal section on [lo, hi]."""
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
    mid = 0.5 * (a + b)
    return mid, f(mid)


@lru_cache(maxsize=8)
def _theta_grid(grid_size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    thetas = np.linspace(0.0, math.pi, grid_size, endpoint=False)
    x = np.tan(0.5 * thetas)
    ax = 1.0 + x * x
    for arr in (thetas, x, ax):
        arr.setflags(write=False)
    return thetas, x, ax


def _coarse_argmax(beta: float, grid_size: int) -> tuple[float, float]:
    """Grid argmax of the phase -1 objective over [0, pi)^2."""
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    thetas, x, ax = _theta_grid(grid_size)
    bx = 1.0 + (T * x) ** 2
    k2 = 1.0 / np.outer(ax, ax)
    k1 = 1.0 / np.outer(bx, bx)
    xy = np.outer(x, x)
    values = c2 * (
        (k2 - k1)
        + (T * xy) ** 2 * (k2 - k1 * T**4)
        - 2.0 * T * xy * (k2 - k1 * T * T)
    )
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(thetas[i]), float(thetas[j])


def _diagonal_argmax(beta: float, grid_size: int) -> float:
    """Grid argmax of the phase -1 objective along theta_d = theta_e.

    The interior optimum lies on this line, but for strongly unbalanced
    states it is a needle far narrower than the 2-D grid spacing; a fine
    1-D scan recovers it cheaply.
    """
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    thetas, x, ax = _theta_grid(grid_size)
    t2 = x * x
    a = (1.0 - T * t2) / ax
    b = (1.0 - T**3 * t2) / (1.0 + T * T * t2)
    values = c2 * (a * a - b * b)
    return float(thetas[int(np.argmax(values))])


def _refine(
    f: Callable[[float, float], float],
    theta_d: float,
    theta_e: float,
    step: float,
    refine_tol: float,
) -> tuple[float, float, float]:
    """Alternating golden-section refinement over the four search directions."""
    lo, hi = 0.0, math.pi - 1e-12
    best = f(theta_d, theta_e)
    h = step
    while h > 0.25 * refine_tol:
        for ud, ue in _REFINE_DIRECTIONS:
            tlo, thi = -h, h
            if ud > 0.0:
                tlo = max(tlo, (lo - theta_d) / ud)
                thi = min(thi, (hi - theta_d) / ud)
            if ue > 0.0:
                tlo = max(tlo, (lo - theta_e) / ue)
                thi = min(thi, (hi - theta_e) / ue)
            elif ue < 0.0:
                tlo = max(tlo, (hi - theta_e) / ue)
                thi = min(thi, (lo - theta_e) / ue)
            if thi <= tlo:
                continue
            t, val = _golden_max(
                lambda t: f(theta_d + t * ud, theta_e + t * ue),
                tlo,
                thi,
                tol=max(0.02 * h, 0.25 * refine_tol),
            )
            if val > best:
                best = val
                theta_d = min(max(theta_d + t * ud, lo), hi)
                theta_e = min(max(theta_e + t * ue, lo), hi)
        h *= 0.35
    return theta_d, theta_e, best


def maximize_gap(
    beta: float,
    *,
    grid_size: int = 400,
    refine_tol: float = 1e-10,
    branch: int = -1,
) -> OptimumRecord:
    """Global maximum of the gap over the two free polar angles.

    Deterministic coarse grid over [0, pi)^2 followed by alternating
    golden-section refinement to refine_tol.  The computation always runs in
    phase -1 coordinates; a branch +1 record reports theta_e_star negated,
    since the +1 optimum sits at the mirrored angle with identical value.
    """
    _check_beta_interior(beta)
    _check_branch(branch)
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size!r}")
    if refine_tol <= 0.0:
        raise DomainError(f"refine_tol must be positive, got {refine_tol!r}")

    state = SchmidtState(beta)
    if abs(beta - QUARTER_PI) <= 1e-12:
        # The objective vanishes identically at maximal entanglement.
        probs = cabello_probs(
            state, solve_constraints(state, 0.0, 0.0, branch=-1).settings
        )
        return OptimumRecord(
            beta=beta,
            theta_d_star=0.0,
            theta_e_star=0.0,
            gap_star=0.0,
            q1_star=probs.q1,
            q4_star=probs.q4,
            hardy_star=0.0,
            stationarity_residual=0.0,
            branch=branch,
            symmetric_optimum=True,
        )

    T = math.tan(beta)
    c2 = math.cos(beta) ** 2

    def objective(td: float, te: float) -> float:
        x = math.tan(0.5 * td)
        y = math.tan(0.5 * te)
        n1 = 1.0 - T * x * y
        n2 = 1.0 - T**3 * x * y
        d1 = (1.0 + x * x) * (1.0 + y * y)
        d2 = (1.0 + (T * x) ** 2) * (1.0 + (T * y) ** 2)
        return c2 * (n1 * n1 / d1 - n2 * n2 / d2)

    td0, te0 = _coarse_argmax(beta, grid_size)
    diag_size = max(8 * grid_size, 3200)
    diag0 = _diagonal_argmax(beta, diag_size)
    candidates = (
        _refine(objective, td0, te0, math.pi / grid_size, refine_tol),
        _refine(objective, diag0, diag0, math.pi / diag_size, refine_tol),
    )
    td, te, gap_star = max(candidates, key=lambda cand: cand[2])

    solution = solve_constraints(state, td, te, branch=-1)
    probs = cabello_probs(state, solution.settings)
    theta_e_star = te if branch == -1 else -te
    residual = stationarity_residual(beta, td, theta_e_star, branch=branch)
    return OptimumRecord(
        beta=beta,
        theta_d_star=td,
        theta_e_star=theta_e_star,
        gap_star=gap_star,
        q1_star=probs.q1,
        q4_star=probs.q4,
        hardy_star=hardy_max(beta, refine_tol=refine_tol),
        stationarity_residual=residual,
        branch=branch,
        symmetric_optimum=abs(td - te) <= 1e-6,
    )


def _hardy_curve(beta: float, grid_size: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Constrained q4 values over an interior theta_d grid, with the
    amplitude prefactor fixed by the additional q1 = 0 constraint."""
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    # q1 = 0 on top of q2 = q3 = 0 forces tan(theta_d/2) tan(theta_e/2) = 1/T^3.
    product = 1.0 / T**3
    amplitude = c2 * (1.0 - 1.0 / (T * T)) ** 2
    thetas = np.linspace(0.0, math.pi, grid_size + 2)[1:-1]
    x = np.tan(0.5 * thetas)
    y = product / x
    values = amplitude / ((1.0 + x * x) * (1.0 + y * y))
    return thetas, values, amplitude


def hardy_max(beta: float, *, grid_size: int = 2001, refine_tol: float = 1e-10) -> float:
    """Maximum success probability of the q1 = 0 variant of the argument.

    The extra zero constraint leaves a one-parameter family; the maximum is
    located by an interior grid plus golden-section refinement.  Vanishes at
    maximal entanglement.
    """
    _check_beta_interior(beta)
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size!r}")
    if abs(beta - QUARTER_PI) <= 1e-12:
        return 0.0
    T = math.tan(beta)
    c2 = math.cos(beta) ** 2
    product = 1.0 / T**3
    amplitude = c2 * (1.0 - 1.0 / (T * T)) ** 2

    def value(theta_d: float) -> float:
        x = math.tan(0.5 * theta_d)
        y = product / x
        return amplitude / ((1.0 + x * x) * (1.0 + y * y))

    thetas, values, _ = _hardy_curve(beta, grid_size)
    i = int(np.argmax(values))
    step = float(thetas[1] - thetas[0])
    lo = max(float(thetas[i]) - step, 1e-12)
    hi = min(float(thetas[i]) + step, math.pi - 1e-12)
    _, best = _golden_max(value, lo, hi, tol=refine_tol)
    return max(best, float(values[i]))


def hardy_max_brute(beta: float, grid_size: int = 100_000) -> float:
    """Brute-force grid maximum of the constrained q4; oracle for hardy_max."""
    _check_beta_interior(beta)
    if abs(beta - QUARTER_PI) <= 1e-12:
        return 0.0
    _, values, _ = _hardy_curve(beta, grid_size)
    return float(values.max())


@dataclass(frozen=True)
class HardyOptimum:
    """State and value maximizing the q1 = 0 success probability."""

    beta_star: float
    hardy_star: float


def hardy_global_max(
    *, beta_grid_size: int = 2001, grid_size: int = 2001, refine_tol: float = 1e-10
) -> HardyOptimum:
    """Maximum of hardy_max over all entangled states."""
    betas = np.linspace(0.0, HALF_PI, beta_grid_size + 2)[1:-1]
    values = [hardy_max(b, grid_size=grid_size, refine_tol=refine_tol) for b in betas]
    i = int(np.argmax(values))
    step = float(betas[1] - betas[0])
    lo = max(float(betas[i]) - step, 1e-12)
    hi = min(float(betas[i]) + step, HALF_PI - 1e-12)
    beta_star, hardy_star = _golden_max(
        lambda b: hardy_max(b, grid_size=grid_size, refine_tol=refine_tol),
        lo,
        hi,
        tol=refine_tol,
    )
    return HardyOptimum(beta_star=float(beta_star), hardy_star=float(hardy_star))


def sweep(
    beta_grid: Iterable[float] | Sequence[float],
    *,
    grid_size: int = 400,
    refine_tol: float = 1e-10,
    branch: int = -1,
) -> list[OptimumRecord]:
    """maximize_gap over a grid of states, aligned with the input order."""
    records = []
    for index, beta in enumerate(beta_grid):
        try:
            records.append(
                maximize_gap(
                    beta, grid_size=grid_size, refine_tol=refine_tol, branch=branch
                )
            )
        except DomainError as exc:
            raise DomainError(f"grid index {index}: {exc}") from exc
    return records
