"""Named wavelet profiles in frequency space.

* :func:`han_psi_delta` smooths a one-dimensional interval wavelet set with
  ramp widths matched across dyadic scales, so that the dyadic energy stays
  exactly 1.
* :func:`h_profile`, :func:`g_profile` and :func:`f_profile` are three
  smoothings of the annular square ``[-2a, 2a]^2 minus [-a, a]^2``.  Only the
  last, whose corners are cut along diagonals, keeps the energy at 1.
* :func:`radial_profile` smooths a spherical shell, which has no corners.
* :func:`bump_psi_m` and :func:`convolve_indicator` are two families that
  approach an indicator as ``m`` grows.  The first has upper frame bound tending
  to 1; the second keeps a fixed gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (InvalidFamily, InvalidMollifier, InvalidParams, NoValidK,
                     SupportTooWide)
from .profiles import (Profile, certify, combine, interval_bump, piecewise,
                       pou_bump, radial_lift, reflect_even, theta, translate)
from .regions import RegionUnion, annular_square, delta_separation, shannon_set

__all__ = [
    "HanIntervalFamily",
    "compute_ki",
    "han_psi_delta",
    "check_annulus_params",
    "h_profile",
    "g_profile",
    "f_profile",
    "f_profile_la",
    "radial_profile",
    "bump_psi_m",
    "bump_m_threshold",
    "MollifierSpec",
    "ConvolvedIndicator",
    "convolve_indicator",
    "frame_gap_threshold",
    "CONSTRUCTIONS",
    "build",
]


def _q(x) -> Fraction:
    # exact binary value; keeps 4 * (1/28) == 1/7 true for float inputs
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x) if isinstance(x, int) else Fraction(float(x))


# --------------------------------------------------------------------------
# one-dimensional interval families

def compute_ki(interval: Sequence, anchor: Sequence) -> int:
    """The unique ``k >= 0`` with ``2**k * interval`` inside ``anchor``.

    >>> compute_ki((1/28, 1/16), (1/7, 2/7))
    2
    """
    lo, hi = _q(interval[0]), _q(interval[1])
    alo, ahi = _q(anchor[0]), _q(anchor[1])
    if lo > hi or alo > ahi:
        raise InvalidFamily("intervals must satisfy lower <= upper")
    if (lo <= 0 <= hi) or (alo <= 0 <= ahi) or (lo > 0) != (alo > 0):
        raise NoValidK("interval and anchor must lie strictly on the same side of 0")
    if lo < 0:
        lo, hi, alo, ahi = -hi, -lo, -ahi, -alo
    k = 0
    scale = Fraction(1)
    # dilates only move away from 0, so stop once the left end passes the anchor
    while lo * scale <= ahi:
        if alo <= lo * scale and hi * scale <= ahi:
            return k
        k += 1
        scale *= 2
    raise NoValidK(f"no dyadic dilate of [{float(lo)}, {float(hi)}] fits in the anchor")


@dataclass(frozen=True)
class HanIntervalFamily:
    """Disjoint closed intervals ordered by decreasing right endpoint.

    ``sign_split`` is the index of the first negative interval (equal to the
    number of intervals for an all-positive family).  ``k`` holds the dyadic
    exponents that carry each interval into its anchor.
    """

    intervals: tuple[tuple[float, float], ...]
    delta: float
    sign_split: int
    k: tuple[int, ...]
    separation: float

    @classmethod
    def build(cls, intervals: Sequence[Sequence], delta: float) -> "HanIntervalFamily":
        if not intervals:
            raise InvalidFamily("family is empty")
        ivs = sorted(((_q(lo), _q(hi)) for lo, hi in intervals), key=lambda p: p[1], reverse=True)
        for lo, hi in ivs:
            if not lo < hi:
                raise InvalidFamily(f"interval [{float(lo)}, {float(hi)}] is empty")
            if lo <= 0 <= hi:
                raise InvalidFamily(f"interval [{float(lo)}, {float(hi)}] contains 0")
        gaps = [ivs[i][0] - ivs[i + 1][1] for i in range(len(ivs) - 1)]
        if any(g <= 0 for g in gaps):
            raise InvalidFamily("intervals must be pairwise disjoint")
        split = sum(1 for lo, _ in ivs if lo > 0)
        if split == 0:
            raise InvalidFamily("family needs at least one positive interval")
        region = RegionUnion.intervals(*ivs)
        sep = delta_separation(region)
        if not sep > 0:
            raise InvalidFamily("the union of the intervals touches one of its integer translates")
        bound = 0.5 * min([sep] + [float(hi - lo) for lo, hi in ivs] + [float(g) for g in gaps])
        delta = float(delta)
        if not (0 < delta < bound):
            raise InvalidFamily(f"delta must lie in (0, {bound!r}), got {delta}")
        top = ivs[0]
        # the outermost positive and (if present) outermost negative intervals are anchors
        last = len(ivs) if split == len(ivs) else len(ivs) - 1
        k = [0]
        for i in range(1, last):
            anchor = (top[1] / 2, top[1]) if i < split else (ivs[-1][0], ivs[-1][0] / 2)
            k.append(compute_ki(ivs[i], anchor))
        if last < len(ivs):
            k.append(0)
        return cls(tuple((float(lo), float(hi)) for lo, hi in ivs), delta, split, tuple(k), float(sep))

    @property
    def hardy(self) -> bool:
        """True for an all-positive family."""
        return self.sign_split == len(self.intervals)

    def ramp_widths(self) -> list[tuple[float, float]]:
        """Left and right ramp widths for each interval, in family order."""
        d, n = self.delta, len(self.intervals)
        out = []
        for i, k in enumerate(self.k):
            if i == 0:
                out.append((d / 2, d))
            elif i == n - 1 and not self.hardy:
                out.append((d, d / 2))
            else:
                w = d * 2.0 ** (-k - 1)
                out.append((w, w))
        return out

    def region(self) -> RegionUnion:
        return RegionUnion.intervals(*self.intervals)


def han_psi_delta(family, delta: float | None = None) -> Profile:
    """Smoothed interval wavelet set with exactly unit dyadic energy.

    ``family`` is a :class:`HanIntervalFamily` or a sequence of intervals (then
    ``delta`` is required).
    """
    if not isinstance(family, HanIntervalFamily):
        if delta is None:
            raise InvalidFamily("delta is required")
        family = HanIntervalFamily.build(family, delta)
    terms = [interval_bump(iv, w1, w2) for iv, (w1, w2) in zip(family.intervals, family.ramp_widths())]
    total = terms[0]
    for t in terms[1:]:
        total = combine("sum", total, t)
    return total


# --------------------------------------------------------------------------
# two-dimensional smoothings of the annular square

def check_annulus_params(a: float, delta: float) -> None:
    if not (0 < a < 0.25):
        raise InvalidParams(f"need 0 < a < 1/4, got a={a}")
    bound = 0.5 * min(1 - 4 * a, a)
    if not (0 < delta < bound):
        raise InvalidParams(f"need 0 < delta < {bound!r} for a={a}, got delta={delta}")


def h_profile(a: float, delta: float) -> Profile:
    """Difference of two rectangle bumps: outer ``[-2a, 2a]^2`` minus inner ``[-a, a]^2``."""
    check_annulus_params(a, delta)
    outer = interval_bump((-2 * a, 2 * a), delta, delta)
    inner = interval_bump((-a, a), delta / 2, delta / 2)
    p = combine("difference", combine("tensor", outer, outer), combine("tensor", inner, inner))
    # both tensors equal 1 on the inner plateau, so the difference vanishes there
    return certify(p, hole=a - delta / 2)


def _quadrant(box_hi, hole, scale, name, cases):
    p = piecewise(2, cases, ((0.0, box_hi), (0.0, box_hi)), hole, scale, name)
    return reflect_even(p)


def _between(v, lo, hi):
    return (v >= lo) & (v <= hi)


def g_profile(a: float, delta: float) -> Profile:
    """Piecewise tensor smoothing of the annular square; square corners."""
    check_annulus_params(a, delta)
    d, e = delta, delta / 2
    R, r = 2 * a, a
    X = lambda p: p[:, 0]
    Y = lambda p: p[:, 1]
    outer_y = lambda p: theta((R - Y(p)) / d)
    outer_x = lambda p: theta((R - X(p)) / d)
    inner_y = lambda p: theta((Y(p) - r) / e)
    inner_x = lambda p: theta((X(p) - r) / e)
    cases = [
        (lambda p: _between(X(p), 0, R - d) & _between(Y(p), R - d, R + d), outer_y),
        (lambda p: _between(X(p), R - d, R + d) & _between(Y(p), R - d, R + d),
         lambda p: outer_y(p) * outer_x(p)),
        (lambda p: _between(Y(p), 0, R - d) & _between(X(p), R - d, R + d), outer_x),
        (lambda p: (X(p) <= R - d) & (Y(p) <= R - d) & ((X(p) > r + e) | (Y(p) > r + e)),
         lambda p: 1.0),
        (lambda p: _between(X(p), 0, r - e) & _between(Y(p), r - e, r + e), inner_y),
        (lambda p: _between(X(p), r - e, r + e) & _between(Y(p), r - e, r + e),
         lambda p: inner_y(p) * inner_x(p)),
        (lambda p: _between(Y(p), 0, r - e) & _between(X(p), r - e, r + e), inner_x),
    ]
    return _quadrant(R + d, r - e, e, "g", cases)


def f_profile(outer: float, inner: float, delta_out: float, delta_in: float) -> Profile:
    """Annular-square smoothing with corners cut along diagonals.

    ``outer``/``inner`` are the half-widths of the outer and inner squares and
    ``delta_out``/``delta_in`` the ramp half-widths at each.  Along each corner
    square the profile depends only on ``|x| + |y|``, which is what lets the
    corner of one scale pair with the corner of the next.
    """
    R, r, d, e = map(float, (outer, inner, delta_out, delta_in))
    if not (d > 0 and e > 0 and 0 < r - e and r + e <= R - d):
        raise InvalidParams(f"need 0 < inner - delta_in and inner + delta_in <= outer - delta_out "
                            f"(outer={R}, inner={r}, delta_out={d}, delta_in={e})")
    X = lambda p: p[:, 0]
    Y = lambda p: p[:, 1]
    S = lambda p: p[:, 0] + p[:, 1]
    outer_band = lambda v: _between(v, R - d, R + d)
    inner_band = lambda v: _between(v, r - e, r + e)
    cases = [
        (lambda p: _between(X(p), 0, R - d) & outer_band(Y(p)), lambda p: theta((R - Y(p)) / d)),
        (lambda p: outer_band(X(p)) & outer_band(Y(p)) & _between(S(p), 2 * R - 2 * d, 2 * R),
         lambda p: theta((2 * R - S(p) - d) / d)),
        (lambda p: _between(Y(p), 0, R - d) & outer_band(X(p)), lambda p: theta((R - X(p)) / d)),
        (lambda p: (X(p) <= R - d) & (Y(p) <= R - d) & ((X(p) > r + e) | (Y(p) > r + e)),
         lambda p: 1.0),
        (lambda p: inner_band(X(p)) & inner_band(Y(p)) & _between(S(p), 2 * r, 2 * r + 2 * e),
         lambda p: 1.0),
        (lambda p: _between(X(p), 0, r - e) & inner_band(Y(p)), lambda p: theta((Y(p) - r) / e)),
        (lambda p: inner_band(X(p)) & inner_band(Y(p)) & _between(S(p), 2 * r - 2 * e, 2 * r),
         lambda p: theta((S(p) - 2 * r + e) / e)),
        (lambda p: _between(Y(p), 0, r - e) & inner_band(X(p)), lambda p: theta((X(p) - r) / e)),
    ]
    return _quadrant(R + d, r - e, min(d, e), "f", cases)


def f_profile_la(a: float, delta: float) -> Profile:
    """The diagonal-corner smoothing of ``[-2a, 2a]^2 minus [-a, a]^2``."""
    check_annulus_params(a, delta)
    return f_profile(2 * a, a, delta, delta / 2)


def radial_profile(a: float, delta: float, d: int) -> Profile:
    """``x -> bump([a, 2a], delta/2, delta)(||x||_2)`` on R^d."""
    check_annulus_params(a, delta)
    return radial_lift(interval_bump((a, 2 * a), delta / 2, delta), int(d))


# --------------------------------------------------------------------------
# partition-of-unity bump

def bump_m_threshold(a: float) -> float:
    return max(6.0 / a, 2.0 / (1.0 - 2.0 * a))


def bump_psi_m(a: float, m: float) -> Profile:
    """Two partition-of-unity bumps of half-width ``a/4`` centred at ``+-3a/4``."""
    if not (0 < a < 0.5):
        raise InvalidParams(f"need 0 < a < 1/2, got a={a}")
    if not m > bump_m_threshold(a):
        raise InvalidParams(f"m too small: need m > {bump_m_threshold(a)!r}, got m={m}")
    base = pou_bump(a / 4, m)
    return combine("sum", translate(base, -0.75 * a), translate(base, 0.75 * a))


# --------------------------------------------------------------------------
# mollified indicators

_SHAPES = ("box", "triangle", "table")


@dataclass(frozen=True, eq=False)
class MollifierSpec:
    """A unit-mass kernel supported on ``[-b, c]``.

    ``shape`` is ``"box"`` (constant), ``"triangle"`` (peak at 0) or
    ``"table"`` (samples ``values`` at ``nodes``, linearly interpolated).
    """

    shape: str
    b: float = 1.0
    c: float = 1.0
    nodes: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise InvalidMollifier(f"unknown mollifier shape {self.shape!r}")
        if not (self.b > 0 and self.c > 0):
            raise InvalidMollifier("support [-b, c] must contain a neighbourhood of 0")
        if self.shape != "table":
            return
        x = np.asarray(self.nodes, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or len(x) < 2 or x.shape != y.shape:
            raise InvalidMollifier("table needs matching node and value arrays")
        if np.any(np.diff(x) <= 0):
            raise InvalidMollifier("table nodes must increase")
        if x[0] < -self.b - 1e-12 or x[-1] > self.c + 1e-12:
            raise InvalidMollifier("table nodes leave the support [-b, c]")
        if np.any(y < 0):
            raise InvalidMollifier("table values must be nonnegative")
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])
        if abs(cum[-1] - 1.0) > 1e-6:
            raise InvalidMollifier(f"kernel integrates to {cum[-1]!r}, not 1")
        object.__setattr__(self, "_x", x)
        object.__setattr__(self, "_cum", cum / cum[-1])

    @classmethod
    def box(cls, b: float = 1.0, c: float = 1.0) -> "MollifierSpec":
        return cls("box", float(b), float(c))

    @classmethod
    def triangle(cls, b: float = 1.0, c: float = 1.0) -> "MollifierSpec":
        return cls("triangle", float(b), float(c))

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], b: float, c: float,
                      nodes: int = 4096) -> "MollifierSpec":
        """Tabulate ``func`` on ``nodes`` points of ``[-b, c]`` and normalise to unit mass."""
        x = np.linspace(-b, c, nodes)
        y = np.clip(np.asarray(func(x), dtype=float), 0.0, None)
        mass = np.trapezoid(y, x)
        if not mass > 0:
            raise InvalidMollifier("kernel has no mass")
        return cls("table", float(b), float(c), tuple(x), tuple(y / mass))

    def density(self, u):
        u = np.asarray(u, dtype=float)
        b, c = self.b, self.c
        inside = (u >= -b) & (u <= c)
        if self.shape == "box":
            return np.where(inside, 1.0 / (b + c), 0.0)
        if self.shape == "triangle":
            peak = 2.0 / (b + c)
            return np.where(inside, np.where(u < 0, peak * (u + b) / b, peak * (c - u) / c), 0.0)
        return np.interp(u, np.asarray(self.nodes), np.asarray(self.values), left=0.0, right=0.0)

    def cdf(self, u):
        """``G(u) = integral of the kernel over (-inf, u]``."""
        u = np.asarray(u, dtype=float)
        b, c = self.b, self.c
        if self.shape == "box":
            return np.clip((u + b) / (b + c), 0.0, 1.0)
        if self.shape == "triangle":
            v = np.clip(u, -b, c)
            left = (v + b) ** 2 / (b * (b + c))
            right = 1.0 - (c - v) ** 2 / (c * (b + c))
            return np.where(v <= 0, left, right)
        return np.interp(u, self._x, self._cum, left=0.0, right=1.0)


@dataclass(frozen=True, eq=False)
class ConvolvedIndicator(Profile):
    """``1_L * g_m`` for an interval union ``L`` and ``g_m(u) = m g(m u)``."""

    intervals: tuple[tuple[float, float], ...]
    mollifier: MollifierSpec
    m: float

    def __post_init__(self):
        b, c, m = self.mollifier.b, self.mollifier.c, self.m
        boxes = [(lo - b / m, hi + c / m) for lo, hi in self.intervals]
        hull = ((min(lo for lo, _ in boxes), max(hi for _, hi in boxes)),)
        inner = min(0.0 if lo <= 0 <= hi else min(abs(lo), abs(hi)) for lo, hi in boxes)
        self._finish(1, hull, inner, min(b, c) / m)

    def _eval(self, pts):
        g = pts[:, 0]
        m, G = self.m, self.mollifier.cdf
        out = np.zeros(len(g))
        for lo, hi in self.intervals:
            out += G(m * (g - lo)) - G(m * (g - hi))
        return out


def convolve_indicator(L: RegionUnion, mollifier: MollifierSpec, m: float) -> ConvolvedIndicator:
    """Mollified indicator of a 1-D interval union; support must stay in (-1/2, 1/2)."""
    if L.dim != 1:
        raise InvalidParams("convolve_indicator needs a one-dimensional region")
    if L.is_empty:
        raise InvalidParams("region is empty")
    if not m > 0:
        raise InvalidParams("m must be positive")
    ivs = tuple((float(lo), float(hi)) for lo, hi in L.merged_intervals())
    p = ConvolvedIndicator(ivs, mollifier, float(m))
    lo, hi = p.support[0]
    if not (-0.5 < lo and hi < 0.5):
        raise SupportTooWide(f"support [{lo!r}, {hi!r}] is not inside (-1/2, 1/2); increase m")
    return p


def frame_gap_threshold(a: float, b: float, c: float) -> float:
    """Smallest ``m`` beyond which mollifying ``[-a, -a/2] U [a/2, a]`` with a kernel on ``[-b, c]`` is admissible."""
    return max(2 * (b + c) / a, (b + c) / (1 - 2 * a), (4 * b + c) / a, (4 * c + b) / a)


def half_annulus(a) -> RegionUnion:
    """``[-a, -a/2] U [a/2, a]``."""
    q = Fraction(repr(float(a))) if not isinstance(a, Fraction) else a
    return RegionUnion.intervals((-q, -q / 2), (q / 2, q))


# --------------------------------------------------------------------------
# registry

def _need(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise InvalidParams(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _region_from(spec) -> RegionUnion:
    if isinstance(spec, RegionUnion):
        return spec
    if spec == "shannon":
        return shannon_set()
    if isinstance(spec, dict):
        if spec.get("name") == "annular_square":
            return annular_square(_need(spec, "a")[0])
        if spec.get("name") == "shannon":
            return shannon_set()
        if "intervals" in spec:
            return RegionUnion.intervals(*spec["intervals"])
        return RegionUnion.from_dict(spec)
    raise InvalidParams(f"cannot interpret region {spec!r}")


def _mollifier_from(spec) -> MollifierSpec:
    if isinstance(spec, MollifierSpec):
        return spec
    if spec is None:
        return MollifierSpec.box()
    if isinstance(spec, str):
        spec = {"shape": spec}
    shape = spec.get("shape", "box")
    b, c = float(spec.get("b", 1.0)), float(spec.get("c", 1.0))
    if shape == "table":
        return MollifierSpec("table", b, c, tuple(map(float, spec.get("nodes", ()))),
                             tuple(map(float, spec.get("values", ()))))
    return MollifierSpec(shape, b, c)


def _build_han(p):
    intervals, delta = _need(p, "intervals", "delta")
    return han_psi_delta(intervals, float(delta))


def _build_f2d(p):
    if "outer" in p:
        return f_profile(*_need(p, "outer", "inner", "delta_out", "delta_in"))
    a, delta = _need(p, "a", "delta")
    return f_profile_la(float(a), float(delta))


def _build_convolved(p):
    m = float(_need(p, "m")[0])
    region = _region_from(p["region"]) if "region" in p else half_annulus(_need(p, "a")[0])
    return convolve_indicator(region, _mollifier_from(p.get("mollifier")), m)


def _build_indicator(p):
    from .profiles import indicator
    return indicator(_region_from(_need(p, "region")[0]))


CONSTRUCTIONS: dict[str, Callable[[dict], Profile]] = {
    "han": _build_han,
    "h2d": lambda p: h_profile(*map(float, _need(p, "a", "delta"))),
    "g2d": lambda p: g_profile(*map(float, _need(p, "a", "delta"))),
    "f2d": _build_f2d,
    "radial": lambda p: radial_profile(float(_need(p, "a")[0]), float(_need(p, "delta")[0]),
                                       int(_need(p, "d")[0])),
    "bump": lambda p: bump_psi_m(*map(float, _need(p, "a", "m"))),
    "convolved": _build_convolved,
    "indicator": _build_indicator,
}


def build(name: str, params: dict) -> Profile:
    """Construct a profile by registry name from a parameter mapping."""
    try:
        factory = CONSTRUCTIONS[name]
    except KeyError:
        raise InvalidParams(f"unknown construction {name!r}") from None
    try:
        return factory(dict(params))
    except (TypeError, ValueError) as exc:
        if hasattr(exc, "category"):
            raise
        raise InvalidParams(str(exc)) from exc


def natural_annulus(name: str, params: dict, profile: Profile) -> float:
    """Annulus parameter to sample on when the config leaves it open."""
    if "a" in params and name != "indicator":
        return float(params["a"])
    if name == "han":
        return float(max(hi for _, hi in params["intervals"])) / 2
    return profile.hole if profile.hole > 0 else 0.25
