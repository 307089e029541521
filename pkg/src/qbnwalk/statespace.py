"""Sparse states over the canonical basis and the elementary mode operators.

A :class:`State` stores its support as a sorted ``uint64`` array of vertices
with a parallel ``complex128`` amplitude array. Vertices outside the support
have amplitude zero. States are treated as immutable values; every operation
returns a new state and none of them prunes small amplitudes on its own.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterator, Mapping

import numpy as np

from .errors import SupportError, StateFormatError
from .vertexspace import check_mode, check_vertex, format_vertex, parse_vertex

PRUNE_EPS = 1e-14

_EMPTY_KEYS = np.zeros(0, dtype=np.uint64)
_EMPTY_VALS = np.zeros(0, dtype=np.complex128)


def _bit(k: int) -> np.uint64:
    return np.uint64(1 << check_mode(k))


def _coalesce(keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort by vertex and sum amplitudes landing on the same vertex."""
    if keys.size == 0:
        return _EMPTY_KEYS, _EMPTY_VALS
    uniq, inverse = np.unique(keys, return_inverse=True)
    if uniq.size == keys.size:
        return uniq, vals[np.argsort(keys, kind="stable")]
    re = np.bincount(inverse, weights=vals.real, minlength=uniq.size)
    im = np.bincount(inverse, weights=vals.imag, minlength=uniq.size)
    return uniq, re + 1j * im


def _permuted(keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Re-sort after a bijective relabelling of the support."""
    order = np.argsort(keys, kind="stable")
    return keys[order], vals[order]


class State:
    """Finite-support vector ``sum_v amp[v] Z_v``."""

    __slots__ = ("vertices", "amplitudes")
    # numpy scalars must defer to __rmul__ instead of iterating the state
    __array_ufunc__ = None

    def __init__(self, vertices=None, amplitudes=None):
        if vertices is None:
            keys, vals = _EMPTY_KEYS, _EMPTY_VALS
        else:
            keys = np.asarray(vertices, dtype=np.uint64).ravel()
            vals = np.asarray(amplitudes, dtype=np.complex128).ravel()
            if keys.shape != vals.shape:
                raise ValueError("vertices and amplitudes differ in length")
            keys, vals = _coalesce(keys, vals)
        keys.setflags(write=False)
        vals.setflags(write=False)
        self.vertices = keys
        self.amplitudes = vals

    @classmethod
    def _raw(cls, keys: np.ndarray, vals: np.ndarray) -> State:
        # keys already sorted and unique
        s = cls.__new__(cls)
        keys.setflags(write=False)
        vals.setflags(write=False)
        s.vertices = keys
        s.amplitudes = vals
        return s

    @classmethod
    def from_mapping(cls, amps: Mapping[int, complex]) -> State:
        keys = [check_vertex(int(v)) for v in amps]
        return cls(np.array(keys, dtype=np.uint64), np.array(list(amps.values()), dtype=complex))

    @classmethod
    def from_dense(cls, vec) -> State:
        """State with amplitude ``vec[i]`` at vertex ``i`` (zeros kept)."""
        vec = np.asarray(vec, dtype=np.complex128)
        return cls._raw(np.arange(vec.size, dtype=np.uint64), vec.copy())

    def to_dense(self, n: int) -> np.ndarray:
        """Amplitude array of length ``2**(n+1)`` indexed by vertex."""
        if not self.is_supported_in(n):
            raise SupportError(f"state support exceeds level {n}")
        out = np.zeros(1 << (n + 1), dtype=np.complex128)
        out[self.vertices.astype(np.intp)] = self.amplitudes
        return out

    def to_dict(self) -> dict[int, complex]:
        return {int(k): complex(v) for k, v in zip(self.vertices, self.amplitudes)}

    def items(self) -> Iterator[tuple[int, complex]]:
        for k, v in zip(self.vertices, self.amplitudes):
            yield int(k), complex(v)

    def __iter__(self) -> Iterator[int]:
        return (int(k) for k in self.vertices)

    def __len__(self) -> int:
        return int(self.vertices.size)

    def __getitem__(self, v: int) -> complex:
        i = np.searchsorted(self.vertices, np.uint64(v))
        if i < self.vertices.size and self.vertices[i] == v:
            return complex(self.amplitudes[i])
        return 0j

    def __repr__(self) -> str:
        terms = ", ".join(f"{format_vertex(v)}: {a:.6g}" for v, a in list(self.items())[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"State({{{terms}{more}}})"

    @property
    def max_vertex(self) -> int:
        return int(self.vertices[-1]) if self.vertices.size else 0

    def is_supported_in(self, n: int) -> bool:
        """True iff every stored vertex lies in ``Γ_n``."""
        return self.max_vertex >> (n + 1) == 0

    def require_level(self, n: int) -> None:
        if not self.is_supported_in(n):
            raise SupportError(
                f"state has support outside Γ_{n} (largest vertex {format_vertex(self.max_vertex)})"
            )

    def norm(self) -> float:
        # fsum makes the value independent of support order
        a = self.amplitudes
        return math.sqrt(math.fsum(np.concatenate([a.real**2, a.imag**2])))

    def normalized(self) -> State:
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero state")
        return State._raw(self.vertices.copy(), self.amplitudes / nrm)

    def prune(self, eps: float = PRUNE_EPS) -> State:
        """Drop amplitudes with modulus below ``eps``."""
        keep = np.abs(self.amplitudes) >= eps
        return State._raw(self.vertices[keep], self.amplitudes[keep])

    def __add__(self, other: State) -> State:
        return State(np.concatenate([self.vertices, other.vertices]),
                     np.concatenate([self.amplitudes, other.amplitudes]))

    def __sub__(self, other: State) -> State:
        return self + (-other)

    def __neg__(self) -> State:
        return State._raw(self.vertices.copy(), -self.amplitudes)

    def __mul__(self, scalar) -> State:
        return State._raw(self.vertices.copy(), self.amplitudes * complex(scalar))

    __rmul__ = __mul__


def basis_state(v: int) -> State:
    return State._raw(np.array([check_vertex(v)], dtype=np.uint64), np.ones(1, dtype=np.complex128))


def uniform_state(n: int) -> State:
    """Unnormalised sum of all basis vectors in ``Γ_n``."""
    size = 1 << (n + 1)
    return State._raw(np.arange(size, dtype=np.uint64), np.ones(size, dtype=np.complex128))


def inner(a: State, b: State) -> complex:
    """``<a, b>``, conjugate-linear in ``a``."""
    _, ia, ib = np.intersect1d(a.vertices, b.vertices, assume_unique=True, return_indices=True)
    return complex(np.sum(np.conj(a.amplitudes[ia]) * b.amplitudes[ib]))


def max_abs_diff(a: State, b: State) -> float:
    """Largest amplitude difference over the union of supports."""
    d = a - b
    return float(np.max(np.abs(d.amplitudes))) if len(d) else 0.0


def apply_annihilation(k: int, xi: State) -> State:
    """``∂_k Z_v = Z_{v minus k}`` if ``k`` in ``v``, else ``0``."""
    bit = _bit(k)
    keep = (xi.vertices & bit) != 0
    # clearing a set bit is monotone on the kept keys; no re-sort needed
    return State._raw(xi.vertices[keep] ^ bit, xi.amplitudes[keep].copy())


def apply_creation(k: int, xi: State) -> State:
    """``∂*_k Z_v = Z_{v plus k}`` if ``k`` not in ``v``, else ``0``."""
    bit = _bit(k)
    keep = (xi.vertices & bit) == 0
    return State._raw(xi.vertices[keep] | bit, xi.amplitudes[keep].copy())


def apply_xi(k: int, xi: State) -> State:
    """``Ξ_k Z_v = Z_{v △ k}``: a relabelling of the support."""
    return State._raw(*_permuted(xi.vertices ^ _bit(k), xi.amplitudes.copy()))


def apply_xi_sigma(sigma: int, xi: State) -> State:
    """Product of ``Ξ_k`` over ``k`` in ``sigma``; identity for the empty set."""
    check_vertex(sigma)
    if sigma == 0:
        return State._raw(xi.vertices.copy(), xi.amplitudes.copy())
    return State._raw(*_permuted(xi.vertices ^ np.uint64(sigma), xi.amplitudes.copy()))


def parity_signs(vertices: np.ndarray) -> np.ndarray:
    """``(-1)**#v`` for each vertex, as float64."""
    return 1.0 - 2.0 * (np.bitwise_count(vertices) & 1).astype(np.float64)


def apply_parity_T(xi: State) -> State:
    """``T Z_v = (-1)**#v Z_v``."""
    return State._raw(xi.vertices.copy(), xi.amplitudes * parity_signs(xi.vertices))


def project_parity(xi: State, sector: str) -> State:
    """``(xi + T xi)/2`` for ``"even"``, ``(xi - T xi)/2`` for ``"odd"``.

    Coordinates outside the sector are removed rather than stored as zeros.
    """
    if sector not in ("even", "odd"):
        raise ValueError(f"sector must be 'even' or 'odd', got {sector!r}")
    odd = (np.bitwise_count(xi.vertices) & 1) == 1
    keep = odd if sector == "odd" else ~odd
    return State._raw(xi.vertices[keep], xi.amplitudes[keep].copy())


def random_state(n: int, rng: np.random.Generator, *, sector: str | None = None) -> State:
    """Unit state with complex Gaussian amplitudes on all of ``Γ_n``."""
    size = 1 << (n + 1)
    vals = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    s = State._raw(np.arange(size, dtype=np.uint64), vals)
    if sector is not None:
        s = project_parity(s, sector)
    return s.normalized()


def state_to_records(xi: State) -> list[dict]:
    return [{"vertex": format_vertex(v), "re": a.real, "im": a.imag} for v, a in xi.items()]


def state_from_records(records) -> State:
    if not isinstance(records, list):
        raise StateFormatError("state JSON must be an array of records")
    seen: dict[int, complex] = {}
    for rec in records:
        try:
            v = parse_vertex(rec["vertex"])
            amp = complex(float(rec["re"]), float(rec["im"]))
        except (KeyError, TypeError) as exc:
            raise StateFormatError(f"bad state record {rec!r}") from exc
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise StateFormatError(f"non-finite amplitude in record {rec!r}")
        if v in seen:
            raise StateFormatError(f"duplicate vertex {format_vertex(v)} in state JSON")
        seen[v] = amp
    return State.from_mapping(seen)


def dumps_state(xi: State) -> str:
    return json.dumps(state_to_records(xi))


def loads_state(text: str) -> State:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"state file is not valid JSON: {exc}") from None
    return state_from_records(data)
