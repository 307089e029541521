import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbnwalk.analysis import (
    SymmetryReport,
    check_operator_identity,
    check_parity_sector_symmetry,
    check_time_reversal,
    distribution,
    max_probability_gap,
    parity_asymmetry,
)
from qbnwalk.errors import NonUnitStateError, SectorViolationError, SupportError
from qbnwalk.evolution import basis_amplitude, oracle_evolve, propagator
from qbnwalk.spectral import weyl_vector
from qbnwalk.statespace import State, basis_state, random_state
from qbnwalk.vertexspace import vertex
from qbnwalk.weights import DEFAULT_WEIGHT

R2 = 1 / math.sqrt(2)
# (Z_empty + i Z_{0}) / sqrt 2: both parities with a complex relative phase
MIXED_COMPLEX = State([0, 1], [R2, 1j * R2])
MIXED_REAL = State([0, 1], [R2, R2])
# max_v |P_t - P_-t| for MIXED_COMPLEX, w0, n=4, t=1.3 from closed-form amplitudes
MIXED_COMPLEX_DEVIATION = 0.8357348091497204


def closed_form_probabilities(w, n, t, coeffs: dict[int, complex]):
    p = propagator(w, n, t)
    return np.array([
        abs(sum(c * basis_amplitude(p, rho, sigma) for rho, c in coeffs.items())) ** 2
        for sigma in range(1 << (n + 1))
    ])


def test_distribution_at_time_zero(w0):
    d = distribution(w0, 5, 0.0, basis_state(0))
    assert d.entries == {0: 1.0}
    assert d.mass == 1.0 and d.truncation_bound == 0.0


def test_first_mode_blocked_at_pi(w0):
    n = 5
    d = distribution(w0, n, math.pi, basis_state(0))
    for sigma in range(1 << (n + 1)):
        if not sigma & 1:
            assert d[sigma] <= 1e-30


@pytest.mark.parametrize("t", [0.4, 1.0, 2.7, -3.9])
def test_return_probability_closed_form(w0, t):
    d = distribution(w0, 3, t, basis_state(0))
    expected = math.prod(math.cos(t / 2 ** (k + 1)) ** 2 for k in range(4))
    assert d[0] == pytest.approx(expected, abs=1e-14)
    oracle = oracle_evolve(w0, 3, t, basis_state(0))
    assert abs(oracle[0]) ** 2 == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("t", np.linspace(-10, 10, 9))
def test_mass_conservation(w0, rng, t):
    d = distribution(w0, 6, t, random_state(6, rng))
    assert d.mass == pytest.approx(1.0, abs=1e-12)
    assert np.all((d.probabilities >= 0) & (d.probabilities <= 1))


def test_distribution_preconditions(w0):
    with pytest.raises(NonUnitStateError):
        distribution(w0, 3, 1.0, State([0], [2.0]))
    with pytest.raises(SupportError):
        distribution(w0, 1, 1.0, basis_state(vertex([4])))


def test_closed_form_distribution_matches_evolve(w0):
    n = 4
    for rho in (0, 3, 17, 31):
        for t in (0.6, -2.2):
            d = distribution(w0, n, t, basis_state(rho))
            cf = closed_form_probabilities(w0, n, t, {rho: 1.0})
            assert np.max(np.abs(d.probabilities - cf[d.vertices.astype(int)])) <= 1e-13
            assert d.vertices.size == 32


def test_time_reversal_examples(w0, rng):
    rep = check_time_reversal(w0, 5, basis_state(0), [0.5, 1.9, -3.0])
    assert rep.passed and rep.max_deviation <= 1e-12
    xi = random_state(5, rng)
    rep = check_time_reversal(w0, 5, xi, [0.7, 2.3])
    assert rep.passed
    rep0 = check_time_reversal(w0, 5, xi, [0.0])
    assert rep0.max_deviation == 0.0


def test_parity_sector_examples(w0):
    assert check_parity_sector_symmetry(w0, 4, basis_state(vertex([0, 1])), "even", [0.7, 2.3]).passed
    assert check_parity_sector_symmetry(w0, 4, basis_state(vertex([2])), "odd", [0.7, 2.3]).passed
    with pytest.raises(SectorViolationError):
        check_parity_sector_symmetry(w0, 4, MIXED_REAL, "even", [1.0])
    with pytest.raises(SectorViolationError):
        check_parity_sector_symmetry(w0, 4, MIXED_REAL, "odd", [1.0])


def test_random_sector_states(w0, rng):
    for sector in ("even", "odd"):
        xi = random_state(5, rng, sector=sector)
        rep = check_parity_sector_symmetry(w0, 5, xi, sector, [0.3, 1.1, 4.0])
        assert rep.passed, rep


def test_negative_control_closed_form(w0):
    n, t = 4, 1.3
    coeffs = {0: R2, 1: 1j * R2}
    cf = np.max(np.abs(closed_form_probabilities(w0, n, t, coeffs)
                       - closed_form_probabilities(w0, n, -t, coeffs)))
    assert cf == pytest.approx(MIXED_COMPLEX_DEVIATION, rel=1e-12)
    measured = parity_asymmetry(w0, n, MIXED_COMPLEX, [t])[0]
    assert measured == pytest.approx(MIXED_COMPLEX_DEVIATION, rel=1e-12)
    assert measured > 1e-6


def test_real_initial_states_are_always_time_symmetric(w0, rng):
    # A is real in the vertex basis, so P_-t(.|xi) = P_t(.|conj xi)
    assert parity_asymmetry(w0, 4, MIXED_REAL, [1.3])[0] <= 1e-12
    real = State(np.arange(32), rng.standard_normal(32)).normalized()
    assert max(parity_asymmetry(w0, 4, real, [0.4, 1.3, 5.0])) <= 1e-12


def test_random_complex_state_is_asymmetric(w0, rng):
    xi = random_state(5, rng)
    assert max(parity_asymmetry(w0, 5, xi, [0.7, 2.3])) > 1e-6


def test_operator_identity_examples(w0):
    rep = check_operator_identity(w0, 6, [0.0], trials=3)
    assert rep.max_deviation == 0.0
    weyl = [weyl_vector(tau, 5) for tau in (0, 9, 63)]
    assert check_operator_identity(w0, 5, [1.1, -2.0], states=weyl).passed
    rep = check_operator_identity(w0, 6, [0.5, -0.5, 3.1, -3.1], trials=10, seed=42)
    assert rep.passed and rep.seed == 42


def test_report_verdict_follows_deviation():
    ok = SymmetryReport("x", 1, [1.0], 1e-13, 1e-12)
    bad = SymmetryReport("x", 1, [1.0], 2e-12, 1e-12)
    assert ok.verdict == "pass" and bad.verdict == "fail"
    assert set(ok.to_dict()) == {"check", "seed", "times", "max_deviation", "tolerance", "verdict"}


def test_ranked_entries(w0):
    d = distribution(w0, 3, 1.0, basis_state(0))
    ranked = d.ranked(4)
    probs = [p for _, p, _ in ranked]
    assert probs == sorted(probs, reverse=True)
    assert ranked[0][0] == 0


def test_probability_gap_union_support():
    from qbnwalk.analysis import Distribution

    a = Distribution(0.0, 1, np.array([0, 1], dtype=np.uint64), np.array([0.5, 0.5]), np.zeros(2), 0.0)
    b = Distribution(0.0, 1, np.array([1, 2], dtype=np.uint64), np.array([0.25, 0.75]), np.zeros(2), 0.0)
    assert max_probability_gap(a, b) == 0.75


@settings(max_examples=40, deadline=None)
@given(t=st.floats(-10, 10), seed=st.integers(0, 2**32 - 1))
def test_prop_time_reversal_any_state(t, seed):
    xi = random_state(4, np.random.default_rng(seed))
    assert check_time_reversal(DEFAULT_WEIGHT, 4, xi, [t]).max_deviation <= 1e-12


@settings(max_examples=40, deadline=None)
@given(t=st.floats(-10, 10), seed=st.integers(0, 2**32 - 1), sector=st.sampled_from(["even", "odd"]))
def test_prop_parity_sector_symmetry(t, seed, sector):
    xi = random_state(4, np.random.default_rng(seed), sector=sector)
    assert check_parity_sector_symmetry(DEFAULT_WEIGHT, 4, xi, sector, [t]).passed
