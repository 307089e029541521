"""Weyl vectors, residual bounds and finite-section spectra.

For a vertex ``sigma`` and level ``n`` the Weyl vector

    u_n = 2**(-(n+1)/2) * prod_{k<=n} (I + E(k) Ξ_k) Z_empty,
    E(k) = +1 if k in sigma else -1,

is a joint eigenvector of ``Ξ_0..Ξ_n``. It is therefore an exact eigenvector
of the level-``n`` section of ``A`` and an approximate eigenvector of ``B``
at the point ``mu(sigma)``, with residual at most ``2 * tail(n)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import EnumerationLimitError, SpectralCheckError
from .operators import TruncatedOperator, apply_adjacency, apply_shifted
from .statespace import State, apply_parity_T, apply_xi, basis_state, max_abs_diff
from .vertexspace import check_level, complement, format_vertex, full_vertex, vertex
from .weights import W0, Weight, make_weight, mu

LEVEL_LIMIT = 20
EXTRA_LEVELS = 6
EIGEN_TOL = 1e-10
GRID_TOL = 1e-12
RESIDUAL_SLACK = 1e-12
FULL_VERIFY_LEVEL = 10
SAMPLE_VERIFY = 256


def _check_enumerable(n: int) -> None:
    check_level(n)
    if n > LEVEL_LIMIT:
        raise EnumerationLimitError(f"level {n} exceeds enumeration limit {LEVEL_LIMIT}")


def weyl_vector(sigma: int, n: int) -> State:
    """Unit joint eigenvector of ``Ξ_0..Ξ_n`` with signs ``E_sigma``."""
    _check_enumerable(n)
    u = basis_state(0)
    for k in range(n + 1):
        sign = 1.0 if sigma >> k & 1 else -1.0
        u = u + sign * apply_xi(k, u)
    return u * 2.0 ** (-(n + 1) / 2)


def weyl_residual(weight, sigma: int, n: int, m: int | None = None) -> tuple[float, float]:
    """``(||B^(m) u_n - mu(sigma ∩ {0..m}) u_n||, 2 * tail(n))``.

    ``B`` is applied at level ``m >= n`` (default ``min(n + 6, 20)``) as a
    stand-in for the untruncated operator.
    """
    w = make_weight(weight)
    if m is None:
        m = min(n + EXTRA_LEVELS, LEVEL_LIMIT)
    if m < n:
        raise ValueError(f"application level m={m} must be >= n={n}")
    _check_enumerable(m)
    u = weyl_vector(sigma, n)
    point = mu(w, sigma & full_vertex(m))
    r = apply_shifted(TruncatedOperator(w, m, "B"), u) - point * u
    return r.norm(), 2.0 * w.tail(n)


def eigen_grid(weight, n: int) -> np.ndarray:
    """``sum_{k<=n} E_tau(k) w(k)`` for each ``tau`` in ``Γ_n``, indexed by ``tau``."""
    w = make_weight(weight)
    _check_enumerable(n)
    grid = np.zeros(1)
    for k in range(n + 1):
        wk = w.values[k]
        grid = np.concatenate([grid - wk, grid + wk])
    return grid


def eigen_residual(weight, n: int, tau: int, lam: float | None = None) -> float:
    """``||A^(n) e - lam e||`` for ``e = weyl_vector(tau, n)``."""
    w = make_weight(weight)
    if lam is None:
        lam = float(eigen_grid(w, n)[tau])
    e = weyl_vector(tau, n)
    return (apply_adjacency(TruncatedOperator(w, n), e) - lam * e).norm()


def _verification_panel(n: int, seed: int) -> np.ndarray:
    size = 1 << (n + 1)
    if n <= FULL_VERIFY_LEVEL:
        return np.arange(size)
    rng = np.random.default_rng(seed)
    sample = rng.choice(size, size=SAMPLE_VERIFY - 2, replace=False)
    return np.unique(np.concatenate([[0, size - 1], sample]))


def analytic_spectrum(weight, n: int, *, verify: bool = True, seed: int = 42) -> np.ndarray:
    """Sorted eigenvalues of the level-``n`` section of ``A``.

    With ``verify`` each candidate is confirmed by its eigenvector residual;
    above level 10 a seeded sample of 256 (always including both extremes) is
    checked instead of all ``2**(n+1)``.
    """
    w = make_weight(weight)
    grid = eigen_grid(w, n)
    if verify:
        worst = max_eigen_residual(w, n, grid, seed=seed)
        if worst > EIGEN_TOL:
            raise SpectralCheckError(f"eigenvector residual {worst:.3e} exceeds {EIGEN_TOL}")
    return np.sort(grid)


def max_eigen_residual(weight, n: int, grid: np.ndarray | None = None, *, seed: int = 42) -> float:
    w = make_weight(weight)
    if grid is None:
        grid = eigen_grid(w, n)
    return max(eigen_residual(w, n, int(tau), float(grid[tau]))
               for tau in _verification_panel(n, seed))


def default_sigma_panel(n: int, seed: int = 42) -> list[int]:
    """``{}``, ``{0}``, ``{1,3}``, ``{0..n}`` and one seeded random subset of ``{0..n}``."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=n + 1)
    rand = vertex(k for k in range(n + 1) if bits[k])
    return [0, vertex([0]), vertex([1, 3]), full_vertex(n), rand]


@dataclass
class WeylEntry:
    sigma: str
    mu: float
    residual: float
    bound: float
    passed: bool


@dataclass
class SpectralReport:
    weight: str
    level: int
    application_level: int
    seed: int
    entries: list[WeylEntry] = field(default_factory=list)
    grid_min: float = 0.0
    grid_max: float = 0.0
    grid_max_gap: float = 0.0
    partial_sum: float = 0.0
    max_eigen_residual: float = 0.0
    residuals_ok: bool = True
    eigenvectors_ok: bool = True
    grid_symmetric: bool = True
    grid_extremes_ok: bool = True
    b_grid_contained: bool = True
    ideal_gap_expected: float | None = None
    ideal_gap_ok: bool | None = None

    @property
    def passed(self) -> bool:
        flags = [self.residuals_ok, self.eigenvectors_ok, self.grid_symmetric,
                 self.grid_extremes_ok, self.b_grid_contained]
        if self.ideal_gap_ok is not None:
            flags.append(self.ideal_gap_ok)
        return all(flags)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _is_w0(w: Weight) -> bool:
    return w.spec == W0


def spectrum_fill_report(weight, n: int, sigmas: list[int] | None = None, *,
                         m: int | None = None, seed: int = 42) -> SpectralReport:
    """Weyl residuals for a panel of vertices plus a summary of the eigenvalue grid.

    For the reference weight ``w(k) = 2**-(k+1)`` the grid is an arithmetic
    progression and its largest gap must be exactly ``2**-n``.
    """
    w = make_weight(weight)
    _check_enumerable(n)
    if m is None:
        m = min(n + EXTRA_LEVELS, LEVEL_LIMIT)
    if sigmas is None:
        sigmas = default_sigma_panel(n, seed)

    report = SpectralReport(weight=w.label, level=n, application_level=m, seed=seed)
    for sigma in sigmas:
        r, bound = weyl_residual(w, sigma, n, m)
        ok = r <= bound + RESIDUAL_SLACK
        report.entries.append(WeylEntry(format_vertex(sigma), mu(w, sigma), r, bound, ok))
    report.residuals_ok = all(e.passed for e in report.entries)

    raw = eigen_grid(w, n)
    grid = np.sort(raw)
    partial = w.partial(n)
    report.partial_sum = partial
    report.grid_min = float(grid[0])
    report.grid_max = float(grid[-1])
    report.grid_max_gap = float(np.max(np.diff(grid))) if grid.size > 1 else 0.0
    report.max_eigen_residual = max_eigen_residual(w, n, raw, seed=seed)
    report.eigenvectors_ok = report.max_eigen_residual <= EIGEN_TOL
    report.grid_symmetric = bool(np.max(np.abs(grid + grid[::-1])) <= GRID_TOL)
    report.grid_extremes_ok = (abs(report.grid_min + partial) <= GRID_TOL
                               and abs(report.grid_max - partial) <= GRID_TOL)
    b_grid = 0.5 * (grid + w.total)
    report.b_grid_contained = bool(b_grid[0] >= -GRID_TOL and b_grid[-1] <= w.total + GRID_TOL)
    if _is_w0(w):
        report.ideal_gap_expected = 2.0 ** -n
        report.ideal_gap_ok = report.grid_max_gap == report.ideal_gap_expected
    return report


def parity_image_of_weyl(tau: int, n: int) -> tuple[float, float]:
    """Compare ``T u_tau`` with ``u_{complement(tau)}``.

    Returns ``(sign, deviation)`` with ``T u_tau = sign * u_comp`` up to
    ``deviation`` in max amplitude.
    """
    tu = apply_parity_T(weyl_vector(tau, n))
    comp = weyl_vector(complement(tau, n), n)
    sign = 1.0 if (tu[0] * comp[0]).real > 0 else -1.0
    return sign, max_abs_diff(tu, sign * comp)
