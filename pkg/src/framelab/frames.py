"""Dyadic sums, cross terms and frame-bound estimates for compactly supported profiles.

For a profile ``p`` on R^d the dyadic energy is

    kappa(gamma) = sum_n |p(2**n gamma)|**2

and the cross-term quantities over integer shifts ``k`` are

    M = sup  sum_k sum_n |p(2**n gamma) p(2**n gamma + k)|          (k = 0 included)
    N = inf  kappa(gamma) - sum_{k != 0} sum_n |p(2**n gamma) p(2**n gamma + k)|

with sup/inf taken over a dyadic annulus.  Both sums are finite here: the
support box of ``p`` bounds the dilations and shifts that can contribute, and
:class:`TruncationPolicy` records those bounds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SupportTouchesZero, UnboundedSupport, ZeroFrequency
from .grids import DyadicAnnulusGrid
from .profiles import Profile, _in_box

__all__ = [
    "TruncationPolicy",
    "FrameBoundReport",
    "ParsevalResult",
    "kappa",
    "kappa_values",
    "kappa_extrema",
    "cross_terms",
    "frame_bound_report",
    "parseval_check",
]


def _check_support(p: Profile) -> None:
    if not p.bounded:
        raise UnboundedSupport("profile support is not bounded")
    if not p.hole > 0:
        raise SupportTouchesZero("support box of the profile contains the origin")


@dataclass(frozen=True)
class TruncationPolicy:
    """Finite index ranges that make the dyadic and translation sums exact.

    For every sample with ``s_lo <= ||gamma||_inf <= s_hi`` and every ``n``
    outside ``[n_min, n_max]``, ``2**n gamma`` is outside the support box; for
    every ``||k||_inf > k_radius`` the box and its shift by ``k`` are disjoint.
    """

    n_min: int
    n_max: int
    k_radius: int = 0

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ValueError("n_min exceeds n_max")
        if self.k_radius < 0:
            raise ValueError("k_radius must be nonnegative")

    @classmethod
    def for_range(cls, p: Profile, s_lo: float, s_hi: float) -> "TruncationPolicy":
        _check_support(p)
        n_min = math.floor(math.log2(p.hole / s_hi))
        n_max = math.ceil(math.log2(p.radius / s_lo))
        width = max(hi - lo for lo, hi in p.support)
        return cls(n_min, n_max, int(math.floor(width)))

    @classmethod
    def for_grid(cls, p: Profile, grid: DyadicAnnulusGrid) -> "TruncationPolicy":
        if grid.dimension != p.dim:
            raise DimensionMismatch(f"grid dimension {grid.dimension} != profile dimension {p.dim}")
        return cls.for_range(p, *grid.sup_norm_range())

    @classmethod
    def for_points(cls, p: Profile, pts: np.ndarray) -> "TruncationPolicy":
        r = np.max(np.abs(pts), axis=1)
        if np.any(r == 0):
            raise ZeroFrequency("kappa is undefined at the origin")
        return cls.for_range(p, float(r.min()), float(r.max()))

    def widened(self, extra_n: int = 0, extra_k: int = 0) -> "TruncationPolicy":
        return TruncationPolicy(self.n_min - extra_n, self.n_max + extra_n, self.k_radius + extra_k)

    def shifts(self, dim: int):
        """Nonzero integer shifts in ``[-k_radius, k_radius]^dim`` in a fixed order."""
        r = self.k_radius
        for k in itertools.product(range(-r, r + 1), repeat=dim):
            if any(k):
                yield np.asarray(k, dtype=float)


def _as_points(p: Profile, gamma) -> np.ndarray:
    pts = np.asarray(gamma, dtype=float)
    if p.dim == 1:
        return pts.reshape(-1, 1)
    if pts.shape[-1] != p.dim:
        raise DimensionMismatch(f"expected points of dimension {p.dim}, got shape {pts.shape}")
    return pts.reshape(-1, p.dim)


def _sums(p: Profile, pts: np.ndarray, trunc: TruncationPolicy, cross: bool = True):
    """``(kappa, cross, cover)`` at each point.

    ``cross`` is the k != 0 double sum, ``cover`` is ``max_n |p(2**n gamma)|``.
    Terms are accumulated in ascending ``n`` then lexicographic ``k``.
    """
    kap = np.zeros(len(pts))
    crs = np.zeros(len(pts))
    cov = np.zeros(len(pts))
    shifts = list(trunc.shifts(p.dim)) if cross else []
    for n in range(trunc.n_min, trunc.n_max + 1):
        y = pts * 2.0**n
        v = p.evaluate(y)
        kap += v * v
        np.maximum(cov, np.abs(v), out=cov)
        if not shifts:
            continue
        live = np.flatnonzero(v)
        if not len(live):
            continue
        y_live, v_live = y[live], np.abs(v[live])
        acc = np.zeros(len(live))
        for k in shifts:
            z = y_live + k
            inside = np.flatnonzero(_in_box(z, p.support))
            if len(inside):
                acc[inside] += v_live[inside] * np.abs(p.evaluate(z[inside]))
        crs[live] += acc
    return kap, crs, cov


def kappa_values(p: Profile, gamma, trunc: TruncationPolicy | None = None) -> np.ndarray:
    """Vectorised dyadic energy at an array of nonzero frequencies."""
    pts = _as_points(p, gamma)
    if np.any(np.all(pts == 0, axis=1)):
        raise ZeroFrequency("kappa is undefined at the origin")
    if trunc is None:
        trunc = TruncationPolicy.for_points(p, pts)
    return _sums(p, pts, trunc, cross=False)[0]


def kappa(p: Profile, gamma, trunc: TruncationPolicy | None = None) -> float:
    """Dyadic energy ``sum_n |p(2**n gamma)|**2`` at a single nonzero frequency.

    >>> from framelab.constructions import bump_psi_m
    >>> round(kappa(bump_psi_m(0.25, 100), 0.25), 12)
    0.5
    """
    vals = kappa_values(p, np.asarray(gamma, dtype=float).reshape(1, -1) if p.dim > 1 else [gamma], trunc)
    return float(vals[0])


@dataclass
class _Scan:
    k_lower: float = math.inf
    k_upper: float = -math.inf
    m_psi: float = -math.inf
    n_psi: float = math.inf
    max_dev: float = -1.0
    cover: float = math.inf
    cross_zero: bool = True
    argmin: np.ndarray | None = None
    argmax: np.ndarray | None = None
    argdev: np.ndarray | None = None
    count: int = 0


def _scan(p: Profile, grid: DyadicAnnulusGrid, trunc: TruncationPolicy | None, cross: bool = True) -> _Scan:
    if trunc is None:
        trunc = TruncationPolicy.for_grid(p, grid)
    elif grid.dimension != p.dim:
        raise DimensionMismatch(f"grid dimension {grid.dimension} != profile dimension {p.dim}")
    out = _Scan()
    for pts in grid.chunks():
        kap, crs, cov = _sums(p, pts, trunc, cross)
        out.count += len(pts)
        i = int(np.argmin(kap))
        if kap[i] < out.k_lower:
            out.k_lower, out.argmin = float(kap[i]), pts[i].copy()
        i = int(np.argmax(kap))
        if kap[i] > out.k_upper:
            out.k_upper, out.argmax = float(kap[i]), pts[i].copy()
        dev = np.abs(kap - 1.0)
        i = int(np.argmax(dev))
        if dev[i] > out.max_dev:
            out.max_dev, out.argdev = float(dev[i]), pts[i].copy()
        out.m_psi = max(out.m_psi, float(np.max(kap + crs)))
        out.n_psi = min(out.n_psi, float(np.min(kap - crs)))
        out.cover = min(out.cover, float(np.min(cov)))
        out.cross_zero &= not np.any(crs)
    if out.count == 0:
        raise ValueError("grid produced no sample points")
    return out


def kappa_extrema(p: Profile, grid: DyadicAnnulusGrid,
                  trunc: TruncationPolicy | None = None) -> tuple[float, float]:
    """``(min, max)`` of the dyadic energy over the grid samples."""
    s = _scan(p, grid, trunc, cross=False)
    return s.k_lower, s.k_upper


def cross_terms(p: Profile, grid: DyadicAnnulusGrid,
                trunc: TruncationPolicy | None = None) -> tuple[float, float, bool]:
    """``(M_psi, N_psi, cross_terms_vanish)`` over the grid samples."""
    s = _scan(p, grid, trunc)
    return s.m_psi, s.n_psi, s.cross_zero


@dataclass(frozen=True)
class FrameBoundReport:
    """Estimated frame-bound quantities for one profile on one grid.

    ``A_bracket`` and ``B_bracket`` bound the lower and upper frame bounds.
    When the support-shrinking hypotheses are verified they collapse to
    ``K_lower`` and ``K_upper``.
    """

    N_psi: float
    M_psi: float
    K_lower: float
    K_upper: float
    cross_terms_vanish: bool
    A_bracket: tuple[float, float]
    B_bracket: tuple[float, float]
    shrink_hypotheses: bool = field(default=False, compare=False)
    shrink_epsilon: float = field(default=0.0, compare=False)
    argmin: tuple[float, ...] = field(default=(), compare=False)
    argmax: tuple[float, ...] = field(default=(), compare=False)
    samples: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        return {
            "N_psi": self.N_psi,
            "M_psi": self.M_psi,
            "K_lower": self.K_lower,
            "K_upper": self.K_upper,
            "cross_terms_vanish": self.cross_terms_vanish,
            "A_bracket": list(self.A_bracket),
            "B_bracket": list(self.B_bracket),
        }


def support_box_separation(p: Profile) -> float:
    """Lower bound for the separation of the support from its integer translates.

    A single box of widths ``w_i`` sits at distance ``1 - max w_i`` from its
    nearest shift; 0 when the box is at least one unit wide.
    """
    return max(0.0, 1.0 - max(hi - lo for lo, hi in p.support))


def frame_bound_report(p: Profile, grid: DyadicAnnulusGrid,
                       trunc: TruncationPolicy | None = None) -> FrameBoundReport:
    _check_support(p)
    s = _scan(p, grid, trunc)
    # covering: every sample has a dilate where |p| > eps, eps = half the worst cover
    eps = s.cover / 2.0
    shrink = eps > 0 and support_box_separation(p) > 0 and p.hole > 0
    if shrink:
        a_br, b_br = (s.k_lower, s.k_lower), (s.k_upper, s.k_upper)
    else:
        a_br, b_br = (s.n_psi, s.k_lower), (s.k_upper, s.m_psi)
    return FrameBoundReport(
        N_psi=s.n_psi, M_psi=s.m_psi, K_lower=s.k_lower, K_upper=s.k_upper,
        cross_terms_vanish=s.cross_zero, A_bracket=a_br, B_bracket=b_br,
        shrink_hypotheses=shrink, shrink_epsilon=eps if shrink else 0.0,
        argmin=tuple(map(float, s.argmin)), argmax=tuple(map(float, s.argmax)),
        samples=s.count,
    )


@dataclass(frozen=True)
class ParsevalResult:
    ok: bool
    max_abs_deviation: float
    argmax: tuple[float, ...]
    cross_terms_vanish: bool = True

    def to_dict(self) -> dict:
        return {"ok": self.ok, "max_abs_deviation": self.max_abs_deviation, "argmax": list(self.argmax)}


def parseval_check(p: Profile, grid: DyadicAnnulusGrid, tol: float = 1e-9,
                   trunc: TruncationPolicy | None = None) -> ParsevalResult:
    """Whether ``|kappa - 1| <= tol`` on every sample and all cross terms vanish."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_support(p)
    s = _scan(p, grid, trunc)
    ok = s.max_dev <= tol and s.cross_zero
    return ParsevalResult(bool(ok), s.max_dev, tuple(map(float, s.argdev)), s.cross_zero)
