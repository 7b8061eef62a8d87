"""Tests for the closed-form probabilities, constraint solver and witnesses.

The amplitude oracle below is a third computation path, independent of both
the closed trigonometric forms and the density-matrix trace: it builds the
eigenvector of each projector explicitly and takes the squared overlap with
the state vector.
"""

import math

import numpy as np
import pytest

from cabello.cabello_engine import (
    CabelloProbs,
    ConstraintSolution,
    Settings,
    cabello_probs,
    check_conditions,
    closed_form_joint,
    nogo_sweep,
    nogo_verify,
    solve_constraints,
    witness_settings,
)
from cabello.quantum_core import (
    Direction,
    DomainError,
    NumericalConsistencyError,
    SchmidtState,
    joint_probability_oracle,
)

TWO_PI = 2.0 * math.pi


def amplitude_oracle(state, dir_a, out_a, dir_b, out_b):
    """|<a| x <b| psi>|^2 from explicit eigenvectors; independent oracle."""

    def eigenvector(direction, outcome):
        c = math.cos(direction.theta / 2.0)
        s = math.sin(direction.theta / 2.0)
        phase = complex(math.cos(direction.phi), math.sin(direction.phi))
        if outcome == +1:
            return np.array([c, phase * s])
        return np.array([s, -phase * c])

    bra = np.conj(
        np.kron(eigenvector(dir_a, out_a), eigenvector(dir_b, out_b))
    )
    return abs(np.dot(bra, state.state_vector())) ** 2


def random_state(rng, entangled=False):
    lo, hi = (0.05, 0.5 * math.pi - 0.05) if entangled else (0.0, 0.5 * math.pi)
    return SchmidtState(beta=rng.uniform(lo, hi), gamma=rng.uniform(0.0, TWO_PI))


def random_direction(rng):
    return Direction(theta=rng.uniform(0.0, math.pi), phi=rng.uniform(0.0, TWO_PI))


def random_settings(rng):
    return Settings(
        f=random_direction(rng),
        d=random_direction(rng),
        g=random_direction(rng),
        e=random_direction(rng),
    )


def test_closed_form_matches_amplitude_and_trace_oracles():
    rng = np.random.default_rng(17)
    worst_amplitude = 0.0
    worst_trace = 0.0
    for _ in range(1000):
        state = random_state(rng)
        dir_a, dir_b = random_direction(rng), random_direction(rng)
        out_a = int(rng.choice([-1, 1]))
        out_b = int(rng.choice([-1, 1]))
        closed = closed_form_joint(state, dir_a, out_a, dir_b, out_b)
        worst_amplitude = max(
            worst_amplitude,
            abs(closed - amplitude_oracle(state, dir_a, out_a, dir_b, out_b)),
        )
        worst_trace = max(
            worst_trace,
            abs(closed - joint_probability_oracle(state, dir_a, out_a, dir_b, out_b)),
        )
    assert worst_amplitude <= 1e-12
    assert worst_trace <= 1e-12


def test_cabello_probs_outcome_patterns():
    state = SchmidtState(beta=0.5, gamma=0.4)
    rng = np.random.default_rng(23)
    settings = random_settings(rng)
    probs = cabello_probs(state, settings)
    patterns = (
        (settings.f, +1, settings.g, +1),
        (settings.d, +1, settings.g, -1),
        (settings.f, -1, settings.e, +1),
        (settings.d, +1, settings.e, +1),
    )
    for q, (a, oa, b, ob) in zip((probs.q1, probs.q2, probs.q3, probs.q4), patterns):
        assert q == pytest.approx(amplitude_oracle(state, a, oa, b, ob), abs=1e-13)


def test_bell_state_all_z_example():
    z = Direction(0.0)
    probs = cabello_probs(SchmidtState(0.25 * math.pi), Settings(f=z, d=z, g=z, e=z))
    assert probs.q1 == pytest.approx(0.5, abs=1e-14)
    assert probs.q2 == 0.0
    assert probs.q3 == 0.0
    assert probs.q4 == pytest.approx(0.5, abs=1e-14)
    assert probs.gap == pytest.approx(0.0, abs=1e-15)


def test_check_conditions_examples():
    assert check_conditions(CabelloProbs(0.05, 0.0, 0.0, 0.15), tol=1e-9).holds
    verdict = check_conditions(CabelloProbs(0.0, 0.0, 0.0, 0.09), tol=1e-9)
    assert not verdict.holds
    assert verdict.reason == "q1 not positive"
    verdict = check_conditions(CabelloProbs(0.1, 0.02, 0.0, 0.2), tol=1e-9)
    assert not verdict.holds
    assert "q2 nonzero" in verdict.failures
    verdict = check_conditions(CabelloProbs(0.2, 0.0, 0.0, 0.2))
    assert verdict.failures == ("gap not positive",)


def test_check_conditions_dual_tolerances():
    # A floating-point-sized q2 passes the zero clause, but a q1 of the same
    # size does not count as genuinely positive.
    probs = CabelloProbs(q1=5e-10, q2=5e-13, q3=0.0, q4=0.1)
    verdict = check_conditions(probs)
    assert verdict.failures == ("q1 not positive",)
    assert check_conditions(CabelloProbs(0.01, 5e-13, 0.0, 0.1)).holds
    with pytest.raises(DomainError):
        check_conditions(probs, tol=0.0)


def test_solve_constraints_zeroes_q2_q3():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        state = random_state(rng, entangled=True)
        theta_d = rng.uniform(0.0, math.pi - 1e-9)
        theta_e = rng.uniform(0.0, math.pi - 1e-9)
        branch = int(rng.choice([-1, 1]))
        free_phase = rng.uniform(0.0, TWO_PI)
        solution = solve_constraints(state, theta_d, theta_e, branch, free_phase)
        probs = cabello_probs(state, solution.settings)
        assert probs.q2 <= 1e-12
        assert probs.q3 <= 1e-12
        # The same must hold on the independent amplitude path.
        s = solution.settings
        assert amplitude_oracle(state, s.d, +1, s.g, -1) <= 1e-12
        assert amplitude_oracle(state, s.f, -1, s.e, +1) <= 1e-12


def test_solve_constraints_links_and_phases():
    state = SchmidtState(beta=math.atan(2.0), gamma=0.0)
    solution = solve_constraints(state, 0.7, 1.1, branch=-1, free_phase=0.0)
    s = solution.settings
    assert math.tan(s.g.theta / 2.0) == pytest.approx(
        2.0 * math.tan(0.35), rel=1e-14
    )
    assert math.tan(s.f.theta / 2.0) == pytest.approx(
        2.0 * math.tan(0.55), rel=1e-14
    )
    assert s.d.phi == 0.0
    assert s.g.phi == 0.0
    assert s.e.phi == pytest.approx(math.pi, abs=1e-15)
    assert s.f.phi == pytest.approx(math.pi, abs=1e-15)
    assert math.cos(s.f.phi + s.g.phi - state.gamma) == pytest.approx(-1.0)
    assert math.cos(s.d.phi + s.e.phi - state.gamma) == pytest.approx(-1.0)
    # theta_d = 0 degenerates the q2 phase relation; the solver notes it.
    degenerate = solve_constraints(state, 0.0, 1.1)
    assert degenerate.settings.g.theta == 0.0
    assert any("theta_d = 0" in note for note in degenerate.notes)


def test_solve_constraints_gauge_invariance():
    state = SchmidtState(beta=0.6, gamma=2.2)
    reference = None
    for k in range(16):
        free_phase = TWO_PI * k / 16.0
        probs = cabello_probs(
            state, solve_constraints(state, 0.9, 0.4, -1, free_phase).settings
        )
        quad = (probs.q1, probs.q2, probs.q3, probs.q4)
        if reference is None:
            reference = quad
        else:
            assert max(abs(a - b) for a, b in zip(quad, reference)) <= 1e-12


def test_solve_constraints_rejections():
    with pytest.raises(DomainError):
        solve_constraints(SchmidtState(beta=0.0), 0.3, 0.3)
    with pytest.raises(DomainError):
        solve_constraints(SchmidtState(beta=0.5 * math.pi), 0.3, 0.3)
    state = SchmidtState(beta=0.6)
    with pytest.raises(DomainError):
        solve_constraints(state, math.pi, 0.3)
    with pytest.raises(DomainError):
        solve_constraints(state, 0.3, -0.1)
    with pytest.raises(DomainError):
        solve_constraints(state, 0.3, 0.3, branch=0)


def test_witness_settings_more_entangled_side():
    # tan(beta) > 1: d and g pinned to theta 0, q1 = cos^4(beta).
    state = SchmidtState(beta=math.acos(0.3), gamma=0.0)
    settings = witness_settings(state)
    assert settings.d.theta == 0.0 and settings.g.theta == 0.0
    probs = cabello_probs(state, settings)
    assert check_conditions(probs).holds
    assert probs.q1 == pytest.approx(0.3**4, abs=1e-14)


def test_witness_settings_less_entangled_side():
    # tan(beta) < 1: d and g pinned to theta pi, q1 = sin^4(beta).
    state = SchmidtState(beta=math.acos(0.8), gamma=1.3)
    settings = witness_settings(state)
    assert settings.d.theta == math.pi and settings.g.theta == math.pi
    probs = cabello_probs(state, settings)
    assert check_conditions(probs).holds
    assert probs.q1 == pytest.approx(state.sin_beta**4, abs=1e-14)


def test_witness_settings_explicit_theta_pair():
    state = SchmidtState(beta=math.atan(2.0))
    theta_e = 0.8
    theta_f = 2.0 * math.atan(2.0 * math.tan(0.4))
    settings = witness_settings(state, theta_e=theta_e, theta_f=theta_f)
    assert check_conditions(cabello_probs(state, settings)).holds
    # Violating the q3 = 0 link or leaving the open interval is rejected.
    with pytest.raises(DomainError):
        witness_settings(state, theta_e=theta_e, theta_f=theta_f + 0.2)
    with pytest.raises(DomainError):
        witness_settings(state, theta_e=0.0)
    with pytest.raises(DomainError):
        witness_settings(state, theta_e=math.pi)


def test_witness_settings_rejects_maximal_and_product():
    with pytest.raises(DomainError):
        witness_settings(SchmidtState(beta=0.25 * math.pi))
    with pytest.raises(DomainError):
        witness_settings(SchmidtState(beta=0.0))


def test_witness_grid_over_both_sides():
    betas = np.concatenate(
        [
            np.linspace(0.01, 0.25 * math.pi - 0.01, 40),
            np.linspace(0.25 * math.pi + 0.01, 0.5 * math.pi - 0.01, 40),
        ]
    )
    for gamma in (0.0, 2.5):
        for beta in betas:
            state = SchmidtState(beta=float(beta), gamma=gamma)
            verdict = check_conditions(cabello_probs(state, witness_settings(state)))
            assert verdict.holds, f"witness failed at beta={beta!r}: {verdict.reason}"


def test_nogo_verify_examples():
    assert abs(nogo_verify(0.0, 0.6, 0.6).gap) <= 1e-14
    assert abs(nogo_verify(0.0, 0.0, 0.5 * math.pi).gap) <= 1e-14
    report = nogo_verify(1.7, 0.9, 1.4, phi_d=0.3, phi_e=5.1)
    assert abs(report.gap) <= 1e-14
    assert report.probs.q2 <= 1e-14 and report.probs.q3 <= 1e-14
    assert report.q1 == report.probs.q1 and report.q4 == report.probs.q4
    with pytest.raises(DomainError):
        nogo_verify(0.0, -0.1, 0.5)


def test_nogo_random_parameterizations():
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(1000):
        report = nogo_verify(
            gamma=rng.uniform(0.0, TWO_PI),
            theta_d=rng.uniform(0.0, math.pi),
            theta_e=rng.uniform(0.0, math.pi),
            phi_d=rng.uniform(0.0, TWO_PI),
            phi_e=rng.uniform(0.0, TWO_PI),
        )
        worst = max(worst, abs(report.gap))
    assert worst <= 1e-13


def test_nogo_sweep_report():
    report = nogo_sweep(trials=500, seed=1)
    assert report.trials == 500
    assert report.all_within
    assert report.max_abs_gap <= 1e-12
    assert report.max_q2 <= 1e-12 and report.max_q3 <= 1e-12
    again = nogo_sweep(trials=500, seed=1)
    assert again.max_abs_gap == report.max_abs_gap
    with pytest.raises(DomainError):
        nogo_sweep(trials=0)


def test_constraint_solution_is_frozen_record():
    state = SchmidtState(beta=0.7)
    solution = solve_constraints(state, 0.5, 0.6)
    assert isinstance(solution, ConstraintSolution)
    assert solution.branch == -1
    assert solution.free_phase == 0.0
    with pytest.raises(AttributeError):
        solution.branch = 1
