"""Vertices of the infinite hypercube as 64-bit masks.

A vertex is a finite subset of the nonnegative integers. It is stored as a
plain Python ``int`` whose bit ``k`` is set iff ``k`` belongs to the subset.
Only bits ``0..WIDTH-1`` are allowed. ``Γ_n`` (all subsets of ``{0..n}``) is
therefore the integer range ``0 .. 2**(n+1) - 1``.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import ModeOutOfRangeError, VertexParseError

WIDTH = 64
EMPTY = 0
_MASK = (1 << WIDTH) - 1


def check_mode(k: int) -> int:
    if not 0 <= k < WIDTH:
        raise ModeOutOfRangeError(f"mode index {k} outside 0..{WIDTH - 1}")
    return k


def check_level(n: int) -> int:
    if not 0 <= n < WIDTH:
        raise ModeOutOfRangeError(f"truncation level {n} outside 0..{WIDTH - 1}")
    return n


def check_vertex(v: int) -> int:
    if v < 0 or v > _MASK:
        raise ModeOutOfRangeError(f"vertex {v:#x} has bits outside 0..{WIDTH - 1}")
    return v


def vertex(elements: Iterable[int] = ()) -> int:
    """Build a vertex from its elements, e.g. ``vertex([0, 2]) == 0b101``."""
    v = 0
    for k in elements:
        v |= 1 << check_mode(k)
    return v


def elements(v: int) -> list[int]:
    """Ascending list of the elements of ``v``."""
    out = []
    k = 0
    while v:
        if v & 1:
            out.append(k)
        v >>= 1
        k += 1
    return out


def full_vertex(n: int) -> int:
    """The vertex ``{0, 1, ..., n}``."""
    return (1 << (check_level(n) + 1)) - 1


def cardinality(v: int) -> int:
    return v.bit_count()


def in_level(v: int, n: int) -> bool:
    """True iff ``v`` belongs to ``Γ_n``."""
    return v >> (n + 1) == 0


def symdiff(a: int, b: int) -> int:
    return a ^ b


def toggle(v: int, k: int) -> int:
    return v ^ (1 << check_mode(k))


def parity_sign(v: int) -> int:
    """``(-1)**#v``."""
    return -1 if v.bit_count() & 1 else 1


def is_adjacent(a: int, b: int) -> bool:
    return (a ^ b).bit_count() == 1


def neighbors(v: int, n: int) -> list[int]:
    """Neighbours of ``v`` along modes ``0..n``, ordered by mode."""
    check_level(n)
    return [v ^ (1 << k) for k in range(n + 1)]


def complement(v: int, n: int) -> int:
    """Complement of ``v`` inside ``{0..n}``."""
    return full_vertex(n) & ~v


def format_vertex(v: int) -> str:
    return "{" + ",".join(str(k) for k in elements(v)) + "}"


def parse_vertex(text: str) -> int:
    """Parse ``"{0,2,5}"``; ``"{}"`` is the empty set. Braces are optional."""
    s = text.strip()
    if s.startswith("{") != s.endswith("}"):
        raise VertexParseError(f"unbalanced braces in vertex {text!r}")
    if s.startswith("{"):
        s = s[1:-1]
    s = s.strip()
    if not s:
        return EMPTY
    try:
        items = [int(part) for part in s.split(",")]
    except ValueError:
        raise VertexParseError(f"vertex elements must be integers: {text!r}") from None
    if any(k < 0 for k in items):
        raise VertexParseError(f"negative element in vertex {text!r}")
    if len(set(items)) != len(items):
        raise VertexParseError(f"repeated element in vertex {text!r}")
    try:
        return vertex(items)
    except ModeOutOfRangeError as exc:
        raise VertexParseError(str(exc)) from None
