"""Summable positive weight sequences on the modes.

Three families are supported:

* ``geometric``: ``w(k) = a * r**k``
* ``powerlaw``: ``w(k) = a * (k + 1)**(-p)``
* ``explicit``: a finite list of positive values, zero beyond its end

Totals and tails are closed-form for the two infinite families so that tail
sums stay accurate far below the rounding drift of summing 64 floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import zeta

from .errors import EnumerationLimitError, WeightSpecError
from .vertexspace import WIDTH, check_level, check_mode, elements

GRID_LEVEL_LIMIT = 20


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    ratio: float | None = None
    scale: float | None = None
    exponent: float | None = None
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "geometric":
            if self.ratio is None or not 0.0 < self.ratio < 1.0:
                raise WeightSpecError(f"geometric ratio must lie in (0, 1), got {self.ratio}")
            if self.scale is None or not self.scale > 0.0:
                raise WeightSpecError(f"geometric scale must be positive, got {self.scale}")
        elif self.kind == "powerlaw":
            if self.exponent is None or not self.exponent > 1.0:
                raise WeightSpecError(f"powerlaw exponent must exceed 1, got {self.exponent}")
            if self.scale is None or not self.scale > 0.0:
                raise WeightSpecError(f"powerlaw scale must be positive, got {self.scale}")
        elif self.kind == "explicit":
            if not self.values:
                raise WeightSpecError("explicit weight needs at least one value")
            if len(self.values) > WIDTH:
                raise WeightSpecError(f"explicit weight has more than {WIDTH} values")
            if any(not (v > 0.0 and math.isfinite(v)) for v in self.values):
                raise WeightSpecError("explicit weight values must be positive and finite")
        else:
            raise WeightSpecError(f"unknown weight kind {self.kind!r}")

    @property
    def label(self) -> str:
        """Canonical text form, parseable by :func:`parse_weight`."""
        if self.kind == "geometric":
            return f"geometric:{self.ratio!r}:{self.scale!r}"
        if self.kind == "powerlaw":
            return f"powerlaw:{self.exponent!r}:{self.scale!r}"
        return "explicit:" + ",".join(repr(v) for v in self.values)


def geometric(ratio: float = 0.5, scale: float | None = None) -> WeightSpec:
    """Geometric weight; ``scale`` defaults to ``1 - ratio`` giving total 1."""
    return WeightSpec("geometric", ratio=float(ratio),
                      scale=float(1.0 - ratio if scale is None else scale))


def powerlaw(exponent: float, scale: float | None = None) -> WeightSpec:
    """Power-law weight; ``scale`` defaults to ``1/zeta(p)`` giving total 1."""
    if scale is None:
        if not exponent > 1.0:
            raise WeightSpecError(f"powerlaw exponent must exceed 1, got {exponent}")
        scale = 1.0 / float(zeta(exponent))
    return WeightSpec("powerlaw", exponent=float(exponent), scale=float(scale))


def explicit(values) -> WeightSpec:
    return WeightSpec("explicit", values=tuple(float(v) for v in values))


@dataclass(frozen=True)
class Weight:
    """A weight with cached values ``w(0..W-1)``, total and tails.

    ``modes`` is the number of modes carrying positive weight: ``WIDTH`` for
    the infinite families, the list length for explicit weights. Anything that
    loops over modes up to a level ``n`` should stop at :meth:`clamp` ``(n)``.
    """

    spec: WeightSpec
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = np.arange(WIDTH, dtype=float)
        s = self.spec
        if s.kind == "geometric":
            vals = s.scale * s.ratio**k
        elif s.kind == "powerlaw":
            vals = s.scale * (k + 1.0) ** (-s.exponent)
        else:
            vals = np.zeros(WIDTH)
            vals[: len(s.values)] = s.values
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def label(self) -> str:
        return self.spec.label

    @property
    def modes(self) -> int:
        return len(self.spec.values) if self.spec.kind == "explicit" else WIDTH

    def clamp(self, n: int) -> int:
        """Highest mode ``<= n`` with nonzero weight."""
        return min(n, self.modes - 1)

    @cached_property
    def total(self) -> float:
        s = self.spec
        if s.kind == "geometric":
            return s.scale / (1.0 - s.ratio)
        if s.kind == "powerlaw":
            return s.scale * float(zeta(s.exponent))
        return math.fsum(s.values)

    def tail(self, n: int) -> float:
        """``sum_{k > n} w(k)``."""
        check_level(n)
        s = self.spec
        if s.kind == "geometric":
            return s.scale * s.ratio ** (n + 1) / (1.0 - s.ratio)
        if s.kind == "powerlaw":
            # Hurwitz zeta: sum_{j >= 0} (j + n + 2)**-p
            return s.scale * float(zeta(s.exponent, n + 2))
        return math.fsum(s.values[n + 1:])

    def partial(self, n: int) -> float:
        """``sum_{k <= n} w(k)``, summed directly."""
        check_level(n)
        return math.fsum(self.values[: n + 1])

    def __call__(self, k: int) -> float:
        return weight_value(self, k)


def make_weight(spec: WeightSpec | Weight | str | None = None) -> Weight:
    """Coerce a spec, a label string or ``None`` (the default weight) to a Weight."""
    if isinstance(spec, Weight):
        return spec
    if spec is None:
        return DEFAULT_WEIGHT
    if isinstance(spec, str):
        spec = parse_weight(spec)
    return Weight(spec)


def weight_value(w: Weight, k: int) -> float:
    return float(w.values[check_mode(k)])


def total_weight(w: Weight) -> float:
    return w.total


def tail_weight(w: Weight, n: int) -> float:
    return w.tail(n)


def mu(w: Weight, v: int) -> float:
    """Sum of ``w(k)`` over the elements ``k`` of vertex ``v``."""
    return math.fsum(w.values[k] for k in elements(v))


def subset_sums(w: Weight, n: int) -> np.ndarray:
    """``mu(w, v)`` for every ``v`` in ``Γ_n``, indexed by ``v``."""
    check_level(n)
    if n > GRID_LEVEL_LIMIT:
        raise EnumerationLimitError(f"level {n} exceeds enumeration limit {GRID_LEVEL_LIMIT}")
    sums = np.zeros(1)
    for k in range(n + 1):
        sums = np.concatenate([sums, sums + w.values[k]])
    return sums


def ideal_grid_report(w: Weight, n: int) -> tuple[np.ndarray, float]:
    """Sorted ``mu`` values over ``Γ_n`` and the largest gap in ``[0, |w|]``.

    The gap is taken over the sorted values with ``0`` and ``|w|`` appended as
    endpoints. For an ideal weight it tends to zero as ``n`` grows.
    """
    vals = np.sort(subset_sums(w, n))
    points = np.concatenate([[0.0], vals, [w.total]])
    return vals, float(np.max(np.diff(points)))


def parse_weight(text: str) -> WeightSpec:
    """Parse ``geometric:<r>[:<a>]``, ``explicit:v1,v2,...`` or ``powerlaw:<p>[:<a>]``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "geometric":
            parts = rest.split(":")
            if not rest or len(parts) > 2:
                raise WeightSpecError(f"expected geometric:<r>[:<a>], got {text!r}")
            return geometric(float(parts[0]), float(parts[1]) if len(parts) == 2 else None)
        if kind == "powerlaw":
            parts = rest.split(":")
            if not rest or len(parts) > 2:
                raise WeightSpecError(f"expected powerlaw:<p>[:<a>], got {text!r}")
            return powerlaw(float(parts[0]), float(parts[1]) if len(parts) == 2 else None)
        if kind == "explicit":
            if not rest:
                raise WeightSpecError(f"expected explicit:v1,v2,..., got {text!r}")
            return explicit(float(v) for v in rest.split(","))
    except ValueError as exc:
        if isinstance(exc, WeightSpecError):
            raise
        raise WeightSpecError(f"bad number in weight {text!r}") from None
    raise WeightSpecError(f"unknown weight kind in {text!r}")


W0 = geometric(0.5, 0.5)
DEFAULT_WEIGHT = Weight(W0)
