"""Exact truncated propagator ``exp(-i t A)`` and an independent dense oracle.

The mode flips ``Ξ_k`` commute and square to the identity, so

    exp(-i t w(k) Ξ_k) = cos(t w(k)) I - i sin(t w(k)) Ξ_k

and the truncated propagator is the product of these ``n + 1`` two-term
factors. There is no time-step error; only mode truncation remains, which
:func:`truncation_error_bound` controls.

The oracle diagonalises the section with a fast Walsh-Hadamard transform
instead and shares no code with the product path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionLimitError, SupportError
from .statespace import State, _coalesce
from .vertexspace import check_level
from .weights import Weight, make_weight

ORACLE_LEVEL_LIMIT = 12
MAX_SUPPORT = 1 << 22


@dataclass(frozen=True)
class Propagator:
    weight: Weight
    level: int
    time: float
    cos: tuple[float, ...]
    sin: tuple[float, ...]

    @property
    def modes(self) -> range:
        return range(len(self.cos))

    def reversed(self) -> Propagator:
        return propagator(self.weight, self.level, -self.time)


def propagator(weight, n: int, t: float) -> Propagator:
    w = make_weight(weight)
    check_level(n)
    angles = [t * w.values[k] for k in range(w.clamp(n) + 1)]
    return Propagator(
        w, n, float(t),
        tuple(math.cos(a) for a in angles),
        tuple(math.sin(a) for a in angles),
    )


def evolve(p: Propagator, xi0: State) -> State:
    """Apply ``prod_k (c_k I - i s_k Ξ_k)`` to ``xi0``, modes ascending."""
    xi0.require_level(p.level)
    keys, vals = xi0.vertices, xi0.amplitudes
    live = sum(1 for s in p.sin if s != 0.0)
    if min(len(xi0) * 2.0**live, 2.0 ** (p.level + 1)) > MAX_SUPPORT:
        raise SupportError(
            f"evolution would exceed {MAX_SUPPORT} stored amplitudes; lower the mode count"
        )
    for k in p.modes:
        c, s = p.cos[k], p.sin[k]
        if s == 0.0:
            # factor is c * I with c = +-1
            if c != 1.0:
                vals = vals * c
            continue
        bit = np.uint64(1 << k)
        keys, vals = _coalesce(
            np.concatenate([keys, keys ^ bit]),
            np.concatenate([c * vals, (-1j * s) * vals]),
        )
    return State._raw(keys.copy(), np.array(vals, dtype=np.complex128))


def basis_amplitude(p: Propagator, rho: int, sigma: int) -> complex:
    """``<Z_sigma, exp(-i t A) Z_rho>`` from the factor table alone."""
    if rho >> (p.level + 1) or sigma >> (p.level + 1):
        raise SupportError(f"vertices must lie in Γ_{p.level}")
    flipped = rho ^ sigma
    if flipped >> len(p.cos):
        # only zero-weight modes separate rho and sigma
        return 0j
    amp = 1 + 0j
    for k in p.modes:
        amp *= -1j * p.sin[k] if flipped >> k & 1 else p.cos[k]
    return amp


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along a power-of-two axis.

    ``out[j] = sum_i (-1)**popcount(i & j) a[i]``.
    """
    a = np.array(a, dtype=np.complex128)
    dim = a.size
    if dim & (dim - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < dim:
        blocks = a.reshape(-1, 2, h)
        x = blocks[:, 0, :].copy()
        y = blocks[:, 1, :]
        blocks[:, 0, :] += y
        blocks[:, 1, :] = x - y
        h *= 2
    return a


def walsh_eigenvalues(weight, n: int) -> np.ndarray:
    """Eigenvalue of the section on the ``j``-th Walsh character, for each ``j``.

    Character ``j`` is ``Ξ_k``-even where bit ``k`` of ``j`` is clear, so it
    equals (up to normalisation) the Weyl vector of the complement of ``j``.
    """
    w = make_weight(weight)
    lam = np.zeros(1)
    for k in range(n + 1):
        wk = w.values[k]
        lam = np.concatenate([lam + wk, lam - wk])
    return lam


def eigenvalue(weight, n: int, tau: int) -> float:
    """``sum_{k<=n} E_tau(k) w(k)`` with ``E_tau(k) = +1`` iff ``k`` in ``tau``."""
    w = make_weight(weight)
    return math.fsum(w.values[k] * (1.0 if tau >> k & 1 else -1.0) for k in range(n + 1))


def oracle_evolve(weight, n: int, t: float, xi0: State) -> State:
    """Dense ``exp(-i t A) xi0`` through the Walsh-Hadamard eigenbasis."""
    if n > ORACLE_LEVEL_LIMIT:
        raise DimensionLimitError(f"oracle level {n} exceeds limit {ORACLE_LEVEL_LIMIT}")
    vec = xi0.to_dense(n)
    coeffs = fwht(vec)
    coeffs *= np.exp(-1j * t * walsh_eigenvalues(weight, n))
    return State.from_dense(fwht(coeffs) / vec.size)


def truncation_error_bound(weight, n: int, t: float) -> float:
    """``|t| * tail(n)``: bound on the change from adding modes above ``n``."""
    return abs(t) * make_weight(weight).tail(n)
