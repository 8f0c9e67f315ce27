"""Smooth profiles on frequency space.

A :class:`Profile` is an immutable, vectorised scalar field on R^d built from a
few primitives (interval bump, partition-of-unity bump, indicator, constant)
and combinators (sum, difference, product, tensor, radial lift, dyadic
dilation, translation, even reflection, piecewise cases).

Every profile carries three certified quantities derived from its construction
parameters:

``support``
    a closed axis-aligned box outside of which the profile is exactly 0;
``hole``
    a radius ``r`` (sup-norm) such that the profile vanishes on
    ``{||x||_inf < r}``; 0 when nothing can be certified;
``scale``
    the smallest length on which the profile varies appreciably, used to pick
    sampling resolutions.

Evaluation is pure; a profile can be shared between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import expit

from .errors import DimensionMismatch, InvalidDimension, InvalidParams

Box = tuple[tuple[float, float], ...]

__all__ = [
    "Box",
    "Profile",
    "theta",
    "theta_prime",
    "interval_bump",
    "pou_bump",
    "indicator",
    "constant",
    "combine",
    "dilate",
    "translate",
    "reflect_even",
    "radial_lift",
    "piecewise",
    "certify",
    "IntervalBump",
    "PouBump",
    "Indicator",
    "Constant",
    "Combine",
    "Dilate",
    "Translate",
    "ReflectEven",
    "RadialLift",
    "Piecewise",
    "Certified",
]


# --------------------------------------------------------------------------
# smooth step

def _ramp(x: np.ndarray) -> np.ndarray:
    # e(1+x) / (e(1+x) + e(1-x)) with e(t) = exp(-1/t) on (-1, 1), as a logistic
    return expit(2.0 * x / (1.0 - x * x))


def theta(x):
    """Smooth step with ``theta(x)**2 + theta(-x)**2 == 1``.

    ``theta = sin(pi/2 * s)`` where ``s`` is the classical exp(-1/t) blend from
    0 at ``x = -1`` to 1 at ``x = 1``.  Since ``s(x) + s(-x) = 1`` the
    Pythagorean identity is exact up to rounding.

    >>> float(theta(0.0)) == math.sqrt(0.5)
    True
    """
    arr = np.asarray(x, dtype=float)
    out = np.where(arr >= 1.0, 1.0, 0.0)
    mid = (arr > -1.0) & (arr < 1.0)
    if np.any(mid):
        xm = arr[mid]
        out[mid] = np.sin(0.5 * np.pi * _ramp(xm))
    if out.ndim == 0:
        return float(out)
    return out


def theta_prime(x):
    """Derivative of :func:`theta` (closed form)."""
    arr = np.asarray(x, dtype=float)
    out = np.zeros_like(arr)
    mid = (arr > -1.0) & (arr < 1.0)
    if np.any(mid):
        xm = arr[mid]
        s = _ramp(xm)
        dz = 2.0 * (1.0 + xm * xm) / (1.0 - xm * xm) ** 2
        out[mid] = np.cos(0.5 * np.pi * s) * 0.5 * np.pi * s * (1.0 - s) * dz
    if out.ndim == 0:
        return float(out)
    return out


# --------------------------------------------------------------------------
# box helpers

def _in_box(pts: np.ndarray, box: Box) -> np.ndarray:
    mask = np.ones(len(pts), dtype=bool)
    for i, (lo, hi) in enumerate(box):
        col = pts[:, i]
        mask &= (col >= lo) & (col <= hi)
    return mask


def _box_hole(box: Box) -> float:
    """Sup-norm distance from the origin to ``box`` (0 if it contains 0)."""
    dist = 0.0
    for lo, hi in box:
        if lo > hi:
            return math.inf
        if lo > 0:
            dist = max(dist, lo)
        elif hi < 0:
            dist = max(dist, -hi)
    return dist


def _hull(p: Box, q: Box) -> Box:
    return tuple((min(a[0], b[0]), max(a[1], b[1])) for a, b in zip(p, q))


def _meet(p: Box, q: Box) -> Box:
    return tuple((max(a[0], b[0]), min(a[1], b[1])) for a, b in zip(p, q))


# --------------------------------------------------------------------------
# base class

class Profile:
    """Immutable scalar field on R^d.

    Subclasses implement ``_eval`` on an ``(N, dim)`` array of points that are
    already known to lie inside ``support``.
    """

    dim: int
    support: Box
    hole: float
    scale: float

    def _finish(self, dim: int, support: Box, hole: float = 0.0, scale: float = math.inf) -> None:
        support = tuple((float(lo), float(hi)) for lo, hi in support)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "hole", max(float(hole), _box_hole(support)))
        object.__setattr__(self, "scale", float(scale))

    def _eval(self, pts: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate at an ``(N, dim)`` array of points; returns shape ``(N,)``."""
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(len(pts))
        inside = _in_box(pts, self.support)
        if inside.all():
            out[:] = self._eval(pts)
        elif inside.any():
            out[inside] = self._eval(pts[inside])
        return out

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if self.dim == 1:
            flat = arr.reshape(-1, 1)
            shape = arr.shape
        else:
            if arr.shape[-1] != self.dim:
                raise DimensionMismatch(f"expected points of dimension {self.dim}, got shape {arr.shape}")
            flat = arr.reshape(-1, self.dim)
            shape = arr.shape[:-1]
        vals = self.evaluate(flat).reshape(shape)
        if vals.ndim == 0:
            return float(vals)
        return vals

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(lo) and math.isfinite(hi) for lo, hi in self.support)

    @property
    def radius(self) -> float:
        """Sup-norm radius of the support box."""
        return max(max(abs(lo), abs(hi)) for lo, hi in self.support)

    # operator sugar
    def __add__(self, other: "Profile") -> "Profile":
        return combine("sum", self, other)

    def __sub__(self, other: "Profile") -> "Profile":
        return combine("difference", self, other)

    def __mul__(self, other: "Profile") -> "Profile":
        return combine("product", self, other)


# --------------------------------------------------------------------------
# primitives

@dataclass(frozen=True, eq=False)
class IntervalBump(Profile):
    """Three-piece bump: theta ramp, plateau 1 on [a+d1, b-d2], theta ramp."""

    a: float
    b: float
    delta1: float
    delta2: float

    def __post_init__(self):
        a, b, d1, d2 = self.a, self.b, self.delta1, self.delta2
        if not (a < b):
            raise InvalidParams(f"interval [{a}, {b}] is empty")
        if not (d1 > 0 and d2 > 0):
            raise InvalidParams("ramp widths must be positive")
        if d1 + d2 > b - a:
            raise InvalidParams(f"delta1 + delta2 = {d1 + d2} exceeds interval length {b - a}")
        self._finish(1, ((a - d1, b + d2),), scale=min(d1, d2))

    def _eval(self, pts):
        x = pts[:, 0]
        a, b, d1, d2 = self.a, self.b, self.delta1, self.delta2
        return np.select(
            [x < a + d1, x <= b - d2],
            [theta((x - a) / d1), 1.0],
            default=theta((b - x) / d2),
        )


@dataclass(frozen=True, eq=False)
class PouBump(Profile):
    """Even partition-of-unity bump: 1 on |x| <= b - 1/m, 0 for |x| >= b + 1/m."""

    b: float
    m: float

    def __post_init__(self):
        if not (self.m > 0 and self.b - 1.0 / self.m > 0):
            raise InvalidParams(f"need b - 1/m > 0 (b={self.b}, m={self.m})")
        r = self.b + 1.0 / self.m
        self._finish(1, ((-r, r),), scale=1.0 / self.m**2)

    def _eval(self, pts):
        g = np.abs(pts[:, 0])
        inv_m = 1.0 / self.m
        far = self.b + inv_m - g   # argument of the numerator
        near = g - self.b + inv_m  # argument of the second denominator term
        out = np.where(near <= 0.0, 1.0, 0.0)
        mid = (near > 0.0) & (far > 0.0)
        if np.any(mid):
            # f(far) / (f(far) + f(near)) with f(t) = exp(-1/t)
            out[mid] = expit(1.0 / near[mid] - 1.0 / far[mid])
        return out


@dataclass(frozen=True, eq=False)
class Indicator(Profile):
    """Indicator of a region (any object with ``contains``/``bounding_box``)."""

    region: object

    def __post_init__(self):
        box = self.region.bounding_box()
        self._finish(self.region.dim, box, hole=self.region.inner_radius())

    def _eval(self, pts):
        return self.region.contains(pts).astype(float)


@dataclass(frozen=True, eq=False)
class Constant(Profile):
    value: float
    ndim: int = 1

    def __post_init__(self):
        self._finish(self.ndim, ((-math.inf, math.inf),) * self.ndim)

    def _eval(self, pts):
        return np.full(len(pts), float(self.value))


# --------------------------------------------------------------------------
# combinators

_KINDS = ("sum", "difference", "product", "tensor")


@dataclass(frozen=True, eq=False)
class Combine(Profile):
    kind: str
    p: Profile
    q: Profile

    def __post_init__(self):
        p, q = self.p, self.q
        if self.kind not in _KINDS:
            raise InvalidParams(f"unknown combinator {self.kind!r}")
        scale = min(p.scale, q.scale)
        if self.kind == "tensor":
            self._finish(p.dim + q.dim, p.support + q.support, max(p.hole, q.hole), scale)
            return
        if p.dim != q.dim:
            raise DimensionMismatch(f"{self.kind} of profiles with dimensions {p.dim} and {q.dim}")
        if self.kind == "product":
            self._finish(p.dim, _meet(p.support, q.support), max(p.hole, q.hole), scale)
        else:
            self._finish(p.dim, _hull(p.support, q.support), min(p.hole, q.hole), scale)

    def _eval(self, pts):
        if self.kind == "tensor":
            k = self.p.dim
            return self.p.evaluate(pts[:, :k]) * self.q.evaluate(pts[:, k:])
        u = self.p.evaluate(pts)
        v = self.q.evaluate(pts)
        if self.kind == "sum":
            return u + v
        if self.kind == "difference":
            return u - v
        return u * v


@dataclass(frozen=True, eq=False)
class Dilate(Profile):
    """``x -> p(2**n x)``."""

    p: Profile
    n: int

    def __post_init__(self):
        f = 2.0 ** (-self.n)
        box = tuple((lo * f, hi * f) for lo, hi in self.p.support)
        self._finish(self.p.dim, box, self.p.hole * f, self.p.scale * f)

    def _eval(self, pts):
        return self.p.evaluate(pts * 2.0**self.n)


@dataclass(frozen=True, eq=False)
class Translate(Profile):
    """``x -> p(x - shift)``."""

    p: Profile
    shift: tuple[float, ...]

    def __post_init__(self):
        if len(self.shift) != self.p.dim:
            raise DimensionMismatch("shift length does not match profile dimension")
        box = tuple((lo + s, hi + s) for (lo, hi), s in zip(self.p.support, self.shift))
        self._finish(self.p.dim, box, 0.0, self.p.scale)

    def _eval(self, pts):
        return self.p.evaluate(pts - np.asarray(self.shift, dtype=float))


@dataclass(frozen=True, eq=False)
class ReflectEven(Profile):
    """``x -> p(|x_1|, ..., |x_d|)``."""

    p: Profile

    def __post_init__(self):
        box = []
        for lo, hi in self.p.support:
            r = max(hi, 0.0)
            box.append((-r, r) if hi >= 0 else (1.0, -1.0))
        self._finish(self.p.dim, tuple(box), self.p.hole, self.p.scale)

    def _eval(self, pts):
        return self.p.evaluate(np.abs(pts))


@dataclass(frozen=True, eq=False)
class RadialLift(Profile):
    """``x -> p(||x||_2)`` for a one-dimensional ``p``."""

    p: Profile
    ndim: int

    def __post_init__(self):
        if self.p.dim != 1:
            raise InvalidDimension("radial lift needs a one-dimensional profile")
        if self.ndim < 2:
            raise InvalidDimension(f"target dimension must be >= 2, got {self.ndim}")
        lo, hi = self.p.support[0]
        r = max(hi, 0.0)
        inner = max(self.p.hole, lo, 0.0) / math.sqrt(self.ndim)
        self._finish(self.ndim, ((-r, r),) * self.ndim, inner, self.p.scale)

    def _eval(self, pts):
        return self.p.evaluate(np.sqrt(np.einsum("ij,ij->i", pts, pts))[:, None])


Case = tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True, eq=False)
class Piecewise(Profile):
    """First-matching-case piecewise profile; 0 where no case applies.

    ``cases`` is a sequence of ``(condition, formula)`` pairs, each mapping an
    ``(N, d)`` point array to a boolean / float array.  ``box``, ``inner`` and
    ``feature`` are the support box, hole radius and feature scale certified by
    whoever builds the cases.
    """

    ndim: int
    cases: tuple[Case, ...]
    box: Box
    inner: float = 0.0
    feature: float = math.inf
    name: str = "piecewise"

    def __post_init__(self):
        self._finish(self.ndim, self.box, self.inner, self.feature)

    def _eval(self, pts):
        conds = [c(pts) for c, _ in self.cases]
        vals = [np.broadcast_to(v(pts), (len(pts),)) for _, v in self.cases]
        return np.select(conds, vals, default=0.0)


@dataclass(frozen=True, eq=False)
class Certified(Profile):
    """Wrap ``p`` with a tighter support box / hole radius known from its construction."""

    p: Profile
    box: Box | None = None
    inner: float = 0.0

    def __post_init__(self):
        box = self.p.support if self.box is None else _meet(self.p.support, self.box)
        self._finish(self.p.dim, box, max(self.inner, self.p.hole), self.p.scale)

    def _eval(self, pts):
        return self.p.evaluate(pts)


# --------------------------------------------------------------------------
# factories

def interval_bump(interval: Sequence[float], delta1: float, delta2: float) -> IntervalBump:
    a, b = interval
    return IntervalBump(float(a), float(b), float(delta1), float(delta2))


def pou_bump(b: float, m: float) -> PouBump:
    return PouBump(float(b), float(m))


def indicator(region) -> Indicator:
    return Indicator(region)


def constant(value: float, dim: int = 1) -> Constant:
    return Constant(float(value), dim)


def combine(kind: str, p: Profile, q: Profile) -> Combine:
    return Combine(kind, p, q)


def dilate(p: Profile, n: int) -> Profile:
    if n == 0:
        return p
    return Dilate(p, int(n))


def translate(p: Profile, shift) -> Translate:
    shift = tuple(float(s) for s in np.atleast_1d(shift))
    return Translate(p, shift)


def reflect_even(p: Profile) -> ReflectEven:
    return ReflectEven(p)


def radial_lift(p: Profile, d_target: int) -> RadialLift:
    return RadialLift(p, int(d_target))


def piecewise(dim: int, cases: Sequence[Case], support: Box, hole: float = 0.0,
              scale: float = math.inf, name: str = "piecewise") -> Piecewise:
    return Piecewise(dim, tuple(cases), tuple(support), float(hole), float(scale), name)


def certify(p: Profile, support: Box | None = None, hole: float = 0.0) -> Certified:
    return Certified(p, None if support is None else tuple(support), float(hole))
