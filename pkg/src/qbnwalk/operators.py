"""Truncated adjacency operator ``A = sum_{k<=n} w(k) Ξ_k`` and its shift ``B``.

``B = (|w| I + A) / 2`` always uses the full total ``|w|``, not the truncated
partial sum, so on a finite section ``B`` is off from the untruncated operator
by at most ``tail(n)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionLimitError, EnumerationLimitError
from .statespace import State, apply_xi, inner, uniform_state
from .vertexspace import check_level
from .weights import Weight, make_weight

DENSE_LEVEL_LIMIT = 12
WITNESS_LEVEL_LIMIT = 20


@dataclass(frozen=True)
class TruncatedOperator:
    weight: Weight
    level: int
    kind: str = "A"

    def __post_init__(self):
        check_level(self.level)
        if self.kind not in ("A", "B"):
            raise ValueError(f"operator kind must be 'A' or 'B', got {self.kind!r}")

    @property
    def modes(self) -> range:
        return range(self.weight.clamp(self.level) + 1)

    def __call__(self, xi: State) -> State:
        return apply_shifted(self, xi) if self.kind == "B" else apply_adjacency(self, xi)


def adjacency(weight=None, level: int = 0) -> TruncatedOperator:
    return TruncatedOperator(make_weight(weight), level, "A")


def shifted(weight=None, level: int = 0) -> TruncatedOperator:
    return TruncatedOperator(make_weight(weight), level, "B")


def apply_adjacency(op: TruncatedOperator, xi: State) -> State:
    """Graph form: ``(A xi)[v] = sum_k w(k) xi[v △ k]``.

    Each output coordinate gathers from its neighbours, looked up in the
    sorted support of ``xi``.
    """
    xi.require_level(op.level)
    if len(xi) == 0:
        return State()
    bits = [np.uint64(1 << k) for k in op.modes]
    targets = np.unique(np.concatenate([xi.vertices ^ b for b in bits]))
    out = np.zeros(targets.size, dtype=np.complex128)
    keys = xi.vertices
    for k, b in zip(op.modes, bits):
        src = targets ^ b
        idx = np.searchsorted(keys, src)
        idx[idx == keys.size] = 0
        hit = keys[idx] == src
        out[hit] += op.weight.values[k] * xi.amplitudes[idx[hit]]
    return State._raw(targets, out)


def apply_adjacency_operator_form(op: TruncatedOperator, xi: State) -> State:
    """``sum_k w(k) Ξ_k xi`` built from the individual mode flips."""
    xi.require_level(op.level)
    acc = State()
    for k in op.modes:
        acc = acc + op.weight.values[k] * apply_xi(k, xi)
    return acc


def apply_shifted(op: TruncatedOperator, xi: State) -> State:
    """``B xi = (|w| xi + A xi) / 2``."""
    a = apply_adjacency(op, xi)
    return 0.5 * (op.weight.total * xi + a)


def dense_matrix(op: TruncatedOperator) -> np.ndarray:
    """Real symmetric matrix of ``op`` on ``Γ_n``; row/column index is the vertex."""
    n = op.level
    if n > DENSE_LEVEL_LIMIT:
        raise DimensionLimitError(f"dense matrix at level {n} exceeds limit {DENSE_LEVEL_LIMIT}")
    dim = 1 << (n + 1)
    idx = np.arange(dim)
    m = np.zeros((dim, dim))
    for k in op.modes:
        m[idx, idx ^ (1 << k)] = op.weight.values[k]
    if op.kind == "B":
        m = 0.5 * (op.weight.total * np.eye(dim) + m)
    return m


def write_matrix_csv(matrix: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in matrix:
            writer.writerow([repr(float(x)) for x in row])


def operator_norm_witness(weight, n: int) -> tuple[State, float]:
    """Normalised uniform superposition over ``Γ_n`` and its Rayleigh quotient.

    Every ``Ξ_k`` with ``k <= n`` fixes the uniform vector, so it is the top
    eigenvector of the section with eigenvalue ``sum_{k<=n} w(k)``.
    """
    w = make_weight(weight)
    check_level(n)
    if n > WITNESS_LEVEL_LIMIT:
        raise EnumerationLimitError(f"level {n} exceeds enumeration limit {WITNESS_LEVEL_LIMIT}")
    u = uniform_state(n)
    u = u * (1.0 / np.sqrt(float(len(u))))
    rayleigh = inner(u, apply_adjacency(TruncatedOperator(w, n), u)).real
    return u, rayleigh
