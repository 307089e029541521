import itertools
import json
import math

import numpy as np
import pytest

from qbnwalk.errors import ModeOutOfRangeError, StateFormatError
from qbnwalk.statespace import (
    PRUNE_EPS,
    State,
    apply_annihilation,
    apply_creation,
    apply_parity_T,
    apply_xi,
    apply_xi_sigma,
    basis_state,
    dumps_state,
    inner,
    loads_state,
    max_abs_diff,
    project_parity,
    random_state,
)
from qbnwalk.vertexspace import WIDTH, vertex

Z = lambda *ks: basis_state(vertex(ks))  # noqa: E731


def same(a: State, b: State, tol=0.0):
    return max_abs_diff(a, b) <= tol


def test_basis_state():
    assert basis_state(0).to_dict() == {0: 1.0}
    assert Z(2).to_dict() == {4: 1.0}
    assert Z(1, 5).norm() == 1.0


def test_inner_examples(rng):
    assert inner(Z(), Z()) == 1.0
    assert inner(Z(0), Z(1)) == 0.0
    a = random_state(3, rng)
    assert abs(inner(a, a).imag) <= 1e-15
    assert inner(a, a).real == pytest.approx(a.norm() ** 2, rel=1e-14)


def test_inner_is_conjugate_linear_in_first_slot(rng):
    a, b = random_state(3, rng), random_state(3, rng)
    c = 0.3 - 2.0j
    assert inner(c * a, b) == pytest.approx(np.conj(c) * inner(a, b), abs=1e-14)
    assert inner(a, c * b) == pytest.approx(c * inner(a, b), abs=1e-14)
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)), abs=1e-15)


def test_annihilation_examples():
    assert same(apply_annihilation(0, Z(0)), Z())
    assert len(apply_annihilation(0, Z())) == 0
    assert same(apply_annihilation(1, Z(0, 1) + Z(0)), Z(0))


def test_creation_examples():
    assert same(apply_creation(0, Z()), Z(0))
    assert len(apply_creation(0, Z(0))) == 0


def test_creation_is_adjoint_of_annihilation():
    n = 3
    for s, t in itertools.product(range(1 << (n + 1)), repeat=2):
        for k in range(n + 1):
            lhs = inner(basis_state(t), apply_creation(k, basis_state(s)))
            rhs = inner(apply_annihilation(k, basis_state(t)), basis_state(s))
            assert lhs == rhs


def test_xi_examples(rng):
    assert same(apply_xi(0, Z()), Z(0))
    xi = random_state(4, rng)
    for k in range(6):
        assert same(apply_xi(k, apply_xi(k, xi)), xi)
    a, b = 0.6 + 0.1j, -0.2j
    got = apply_xi(0, a * Z() + b * Z(1))
    assert same(got, a * Z(0) + b * Z(0, 1))


def test_xi_preserves_norm_exactly(rng):
    xi = random_state(5, rng)
    assert apply_xi(3, xi).norm() == xi.norm()


def test_mode_errors():
    for op in (apply_annihilation, apply_creation, apply_xi):
        with pytest.raises(ModeOutOfRangeError):
            op(WIDTH, Z())


def test_xi_sigma(rng):
    assert same(apply_xi_sigma(vertex([0, 1]), Z()), Z(0, 1))
    xi = random_state(4, rng)
    assert same(apply_xi_sigma(0, xi), xi)
    s = vertex([0, 3, 4])
    assert same(apply_xi_sigma(s, apply_xi_sigma(s, xi)), xi)
    # agrees with the ordered product of single flips
    manual = apply_xi(0, apply_xi(3, apply_xi(4, xi)))
    assert same(apply_xi_sigma(s, xi), manual)
    for sigma in range(32):
        assert same(apply_xi_sigma(sigma, Z()), basis_state(sigma))


def test_parity_T(rng):
    assert same(apply_parity_T(Z()), Z())
    assert same(apply_parity_T(Z(3)), -1 * Z(3))
    xi = random_state(4, rng)
    assert same(apply_parity_T(apply_parity_T(xi)), xi)
    assert apply_parity_T(xi).norm() == xi.norm()
    assert np.array_equal(apply_parity_T(xi).vertices, xi.vertices)


def test_project_parity(rng):
    assert len(project_parity(Z(0), "even")) == 0
    assert same(project_parity(Z() + Z(1), "even"), Z())
    xi = random_state(4, rng)
    even, odd = project_parity(xi, "even"), project_parity(xi, "odd")
    assert same(apply_parity_T(even), even)
    assert same(apply_parity_T(odd), -1 * odd)
    assert same(even + odd, xi, 1e-14)
    assert abs(inner(even, odd)) <= 1e-14
    # matches the (xi +- T xi)/2 form
    assert same(even, 0.5 * (xi + apply_parity_T(xi)), 1e-15)
    assert same(odd, 0.5 * (xi - apply_parity_T(xi)), 1e-15)
    with pytest.raises(ValueError):
        project_parity(xi, "mixed")


@pytest.mark.parametrize("trial", range(5))
def test_car_relations(rng, trial):
    n = 4
    xi = random_state(n, rng)
    for k in range(n + 1):
        aa = apply_annihilation(k, apply_annihilation(k, xi))
        cc = apply_creation(k, apply_creation(k, xi))
        assert aa.norm() == 0.0 and cc.norm() == 0.0
        anti = apply_annihilation(k, apply_creation(k, xi)) + apply_creation(k, apply_annihilation(k, xi))
        assert same(anti, xi, 1e-14)


@pytest.mark.parametrize("trial", range(3))
def test_commutation_for_distinct_modes(rng, trial):
    n = 4
    xi = random_state(n, rng)
    d, c = apply_annihilation, apply_creation
    for j, k in itertools.permutations(range(n + 1), 2):
        assert same(d(j, d(k, xi)), d(k, d(j, xi)), 1e-14)
        assert same(c(j, c(k, xi)), c(k, c(j, xi)), 1e-14)
        assert same(d(j, c(k, xi)), c(k, d(j, xi)), 1e-14)
        assert same(apply_xi(j, apply_xi(k, xi)), apply_xi(k, apply_xi(j, xi)))


def test_xi_is_sum_of_creation_and_annihilation(rng):
    xi = random_state(4, rng)
    for k in range(5):
        assert same(apply_xi(k, xi), apply_creation(k, xi) + apply_annihilation(k, xi))


def test_parity_anticommutes_with_xi(rng):
    xi = random_state(5, rng)
    for k in range(8):
        total = apply_parity_T(apply_xi(k, xi)) + apply_xi(k, apply_parity_T(xi))
        assert np.all(total.amplitudes == 0)


def test_prune_is_explicit():
    s = State.from_mapping({0: 1.0, 1: 1e-16, 2: 1e-3})
    assert len(s) == 3
    assert s.prune().to_dict() == {0: 1.0, 2: 1e-3}
    assert np.all(np.abs(s.prune().amplitudes) >= PRUNE_EPS)


def test_linear_combination_coalesces():
    s = State([3, 1, 3], [1.0, 2.0, 0.5j])
    assert s.to_dict() == {1: 2.0, 3: 1.0 + 0.5j}
    assert s[3] == 1.0 + 0.5j and s[7] == 0


def test_json_roundtrip(rng):
    xi = random_state(3, rng)
    back = loads_state(dumps_state(xi))
    assert same(back, xi)
    recs = json.loads(dumps_state(Z(0, 2)))
    assert recs == [{"vertex": "{0,2}", "re": 1.0, "im": 0.0}]


@pytest.mark.parametrize("text", [
    '[{"vertex": "{0}", "re": 1, "im": 0}, {"vertex": "{0}", "re": 0, "im": 1}]',
    '{"vertex": "{0}"}',
    '[{"vertex": "{0}", "re": 1}]',
    '[{"vertex": "{x}", "re": 1, "im": 0}]',
    'not json',
])
def test_json_rejects(text):
    with pytest.raises((StateFormatError, ValueError)):
        loads_state(text)


def test_random_state_sectors(rng):
    even = random_state(4, rng, sector="even")
    assert math.isclose(even.norm(), 1.0, rel_tol=1e-14)
    assert all(bin(v).count("1") % 2 == 0 for v, _ in even.items())
