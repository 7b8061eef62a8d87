"""Local-hidden-variable side of the argument, plus a Monte Carlo estimator.

A deterministic local strategy preassigns an outcome to each of the four
observables; locality means the side A assignments cannot depend on which
side B observable is measured.  For every one of the 16 strategies the
indicator inequality

    1[D=+1, E=+1] <= 1[F=+1, G=+1] + 1[D=+1, G=-1] + 1[F=-1, E=+1]

holds, so by convexity every LHV model obeys q4 <= q1 + q2 + q3.  A state
and settings with quantum_violation > 0 therefore admit no local model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cabello_engine import CabelloProbs, Settings, cabello_probs
from .quantum_core import (
    OUTCOME_PAIRS,
    Direction,
    DomainError,
    SchmidtState,
    outcome_distribution,
)

__all__ = [
    "DeterministicStrategy",
    "StrategyRow",
    "LocalBoundReport",
    "SampleStats",
    "all_strategies",
    "local_bound_check",
    "mixture_probs",
    "quantum_violation",
    "sample_probs",
]

# Observable pairs measured for (q1, q2, q3, q4) and the outcome pattern
# counted as the event for each.
PAIR_LABELS = ("fg", "dg", "fe", "de")
EVENT_OUTCOMES = ((+1, +1), (+1, -1), (-1, +1), (+1, +1))


def _check_sign(name: str, value: int) -> int:
    v = int(value)
    if v not in (+1, -1):
        raise DomainError(f"{name} must be +1 or -1, got {value!r}")
    return v


@dataclass(frozen=True)
class DeterministicStrategy:
    """Preassigned outcomes for f, d (side A) and g, e (side B)."""

    f: int
    d: int
    g: int
    e: int

    def __post_init__(self) -> None:
        for name in ("f", "d", "g", "e"):
            object.__setattr__(self, name, _check_sign(name, getattr(self, name)))

    def probs(self) -> CabelloProbs:
        """The (q1, q2, q3, q4) this strategy produces, each 0 or 1."""
        return CabelloProbs(
            q1=1.0 if (self.f, self.g) == (+1, +1) else 0.0,
            q2=1.0 if (self.d, self.g) == (+1, -1) else 0.0,
            q3=1.0 if (self.f, self.e) == (-1, +1) else 0.0,
            q4=1.0 if (self.d, self.e) == (+1, +1) else 0.0,
        )


def all_strategies() -> tuple[DeterministicStrategy, ...]:
    """All 16 deterministic local strategies, in lexicographic order."""
    return tuple(
        DeterministicStrategy(f, d, g, e)
        for f, d, g, e in itertools.product((+1, -1), repeat=4)
    )


@dataclass(frozen=True)
class StrategyRow:
    strategy: DeterministicStrategy
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class LocalBoundReport:
    all_hold: bool
    rows: tuple[StrategyRow, ...]


def local_bound_check() -> LocalBoundReport:
    """Verify the indicator inequality on every deterministic strategy.

    Integer arithmetic throughout; no tolerances.
    """
    rows = []
    for strategy in all_strategies():
        p = strategy.probs()
        lhs = int(p.q4)
        rhs = int(p.q1) + int(p.q2) + int(p.q3)
        rows.append(StrategyRow(strategy=strategy, lhs=lhs, rhs=rhs))
    return LocalBoundReport(all_hold=all(r.holds for r in rows), rows=tuple(rows))


def mixture_probs(
    weights: Sequence[float],
    strategies: Sequence[DeterministicStrategy] | None = None,
) -> CabelloProbs:
    """The (q1...q4) of a probabilistic mixture of deterministic strategies."""
    if strategies is None:
        strategies = all_strategies()
    if len(weights) != len(strategies):
        raise DomainError(
            f"{len(weights)} weights for {len(strategies)} strategies"
        )
    if any(w < 0.0 for w in weights):
        raise DomainError("mixture weights must be nonnegative")
    total = float(np.sum(weights))
    if abs(total - 1.0) > 1e-9:
        raise DomainError(f"mixture weights sum to {total!r}, expected 1")
    q = np.zeros(4)
    for w, strategy in zip(weights, strategies):
        p = strategy.probs()
        q += w * np.array([p.q1, p.q2, p.q3, p.q4])
    return CabelloProbs(q1=float(q[0]), q2=float(q[1]), q3=float(q[2]), q4=float(q[3]))


def quantum_violation(state: SchmidtState, settings: Settings) -> float:
    """q4 - q1 - q2 - q3; positive values are impossible for any LHV model."""
    p = cabello_probs(state, settings)
    return p.q4 - p.q1 - p.q2 - p.q3


@dataclass(frozen=True)
class SampleStats:
    """Outcome counts from sampling each observable pair independently.

    counts[k][m] is the number of draws of OUTCOME_PAIRS[m] for the k-th
    observable pair in PAIR_LABELS order.
    """

    trials_per_pair: int
    seed: int
    counts: tuple[tuple[int, int, int, int], ...]

    @property
    def q_hat(self) -> CabelloProbs:
        """Empirical estimates of (q1, q2, q3, q4)."""
        n = float(self.trials_per_pair)
        estimates = [
            self.counts[k][OUTCOME_PAIRS.index(EVENT_OUTCOMES[k])] / n
            for k in range(4)
        ]
        return CabelloProbs(*estimates)


def sample_probs(
    state: SchmidtState, settings: Settings, trials_per_pair: int, seed: int
) -> SampleStats:
    """Monte Carlo outcome counts drawn from the exact joint distributions.

    Each observable pair gets its own substream derived from (seed, pair
    index), so results are reproducible and independent of evaluation order.
    Sampling is inverse-CDF over the four-outcome distribution from the
    matrix-path oracle.
    """
    if trials_per_pair < 1:
        raise DomainError(f"trials_per_pair must be >= 1, got {trials_per_pair!r}")
    pairs: tuple[tuple[Direction, Direction], ...] = (
        (settings.f, settings.g),
        (settings.d, settings.g),
        (settings.f, settings.e),
        (settings.d, settings.e),
    )
    counts = []
    for k, (dir_a, dir_b) in enumerate(pairs):
        dist = outcome_distribution(state, dir_a, dir_b)
        cdf = np.cumsum(dist)
        cdf[-1] = 1.0
        rng = np.random.default_rng([seed, k])
        draws = np.searchsorted(cdf, rng.random(trials_per_pair), side="right")
        counts.append(tuple(int(c) for c in np.bincount(draws, minlength=4)))
    return SampleStats(
        trials_per_pair=trials_per_pair, seed=seed, counts=tuple(counts)
    )
