"""Walk distributions and the parity time-reversal checks.

Every check returns a :class:`SymmetryReport` whose verdict is ``"pass"``
exactly when the measured deviation is within its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonUnitStateError, SectorViolationError
from .evolution import evolve, propagator
from .statespace import State, apply_parity_T, max_abs_diff, project_parity, random_state
from .weights import make_weight

UNIT_TOL = 1e-10
SECTOR_TOL = 1e-10
IDENTITY_TOL = 1e-12

CHECK_IDS = {
    "time_reversal": "time_reversal_prop44",
    "parity_even": "parity_even_thm45",
    "parity_odd": "parity_odd_thm45",
    "operator": "operator_identity_thm44",
}


@dataclass
class Distribution:
    time: float
    level: int
    vertices: np.ndarray
    probabilities: np.ndarray
    amplitudes: np.ndarray
    truncation_bound: float

    @property
    def mass(self) -> float:
        return math.fsum(self.probabilities)

    @property
    def entries(self) -> dict[int, float]:
        return {int(v): float(p) for v, p in zip(self.vertices, self.probabilities)}

    def __getitem__(self, v: int) -> float:
        i = np.searchsorted(self.vertices, np.uint64(v))
        if i < self.vertices.size and self.vertices[i] == v:
            return float(self.probabilities[i])
        return 0.0

    def ranked(self, top: int | None = None) -> list[tuple[int, float, complex]]:
        """Entries by descending probability, ties by vertex order."""
        order = np.lexsort((self.vertices, -self.probabilities))
        if top is not None:
            order = order[:top]
        return [(int(self.vertices[i]), float(self.probabilities[i]), complex(self.amplitudes[i]))
                for i in order]


def _require_unit(xi0: State) -> None:
    nrm = xi0.norm()
    if abs(nrm - 1.0) > UNIT_TOL:
        raise NonUnitStateError(f"initial state has norm {nrm!r}, expected 1")


def distribution(weight, n: int, t: float, xi0: State) -> Distribution:
    """``P_t(v | xi0) = |<Z_v, exp(-i t A^(n)) xi0>|**2`` over ``Γ_n``."""
    w = make_weight(weight)
    _require_unit(xi0)
    xi_t = evolve(propagator(w, n, t), xi0)
    amps = xi_t.amplitudes
    return Distribution(
        time=float(t),
        level=n,
        vertices=xi_t.vertices,
        probabilities=amps.real**2 + amps.imag**2,
        amplitudes=amps,
        truncation_bound=abs(t) * w.tail(n),
    )


def max_probability_gap(a: Distribution, b: Distribution) -> float:
    """``max_v |a[v] - b[v]|`` over the union of supports."""
    keys = np.union1d(a.vertices, b.vertices)
    pa = np.zeros(keys.size)
    pb = np.zeros(keys.size)
    pa[np.searchsorted(keys, a.vertices)] = a.probabilities
    pb[np.searchsorted(keys, b.vertices)] = b.probabilities
    return float(np.max(np.abs(pa - pb))) if keys.size else 0.0


@dataclass
class SymmetryReport:
    check: str
    seed: int | None
    times: list[float]
    max_deviation: float
    tolerance: float
    per_time: list[float] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.max_deviation <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "seed": self.seed,
            "times": list(self.times),
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


def _report(check: str, seed, times, per_time, tol) -> SymmetryReport:
    times = [float(t) for t in times]
    return SymmetryReport(check, seed, times, max(per_time, default=0.0), tol, list(per_time))


def check_time_reversal(weight, n: int, xi0: State, times, *, seed: int | None = None,
                        tol: float = IDENTITY_TOL) -> SymmetryReport:
    """``P_t(. | T xi0)`` against ``P_{-t}(. | xi0)`` for each time."""
    w = make_weight(weight)
    _require_unit(xi0)
    t_xi0 = apply_parity_T(xi0)
    devs = [max_probability_gap(distribution(w, n, t, t_xi0), distribution(w, n, -t, xi0))
            for t in times]
    return _report(CHECK_IDS["time_reversal"], seed, times, devs, tol)


def sector_distance(xi0: State, sector: str) -> float:
    return (project_parity(xi0, sector) - xi0).norm()


def parity_asymmetry(weight, n: int, xi0: State, times) -> list[float]:
    """``max_v |P_t(v | xi0) - P_{-t}(v | xi0)|`` for each time, no precondition."""
    w = make_weight(weight)
    return [max_probability_gap(distribution(w, n, t, xi0), distribution(w, n, -t, xi0))
            for t in times]


def check_parity_sector_symmetry(weight, n: int, xi0: State, sector: str, times, *,
                                 seed: int | None = None,
                                 tol: float = IDENTITY_TOL) -> SymmetryReport:
    """``P_t = P_{-t}`` for an initial state inside one parity sector.

    Raises :class:`SectorViolationError` if ``xi0`` is not in ``sector``.
    """
    if sector not in ("even", "odd"):
        raise ValueError(f"sector must be 'even' or 'odd', got {sector!r}")
    _require_unit(xi0)
    dist = sector_distance(xi0, sector)
    if dist > SECTOR_TOL:
        raise SectorViolationError(
            f"initial state is {dist:.3e} away from the {sector} sector"
        )
    devs = parity_asymmetry(weight, n, xi0, times)
    return _report(CHECK_IDS[f"parity_{sector}"], seed, times, devs, tol)


def operator_deviation(weight, n: int, t: float, xi: State) -> float:
    """``max |T exp(-itA) xi - exp(itA) T xi|`` over amplitudes."""
    w = make_weight(weight)
    lhs = apply_parity_T(evolve(propagator(w, n, t), xi))
    rhs = evolve(propagator(w, n, -t), apply_parity_T(xi))
    return max_abs_diff(lhs, rhs)


def check_operator_identity(weight, n: int, times, trials: int = 10, *, seed: int = 42,
                            states: list[State] | None = None,
                            tol: float = IDENTITY_TOL) -> SymmetryReport:
    """``T exp(-itA) = exp(itA) T`` on seeded random unit states (or given ``states``)."""
    w = make_weight(weight)
    if states is None:
        rng = np.random.default_rng(seed)
        states = [random_state(n, rng) for _ in range(trials)]
    devs = [max(operator_deviation(w, n, t, xi) for xi in states) for t in times]
    return _report(CHECK_IDS["operator"], seed, times, devs, tol)
