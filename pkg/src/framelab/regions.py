"""Unions of axis-aligned boxes and the geometric functionals on them.

Box endpoints are stored as exact rationals.  A float endpoint is read through
its shortest decimal representation (``0.2`` means 1/5), so the separation
``Delta`` of ``[-0.2, -0.1] U [0.1, 0.2]`` comes out as exactly ``0.6``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateRegion, InvalidParams, InvalidRegion
from .grids import DyadicAnnulusGrid

__all__ = [
    "RegionUnion",
    "TilingDefect",
    "exact",
    "annular_square",
    "shannon_set",
    "box_distance",
    "delta_separation",
    "translation_overlap",
    "dyadic_tiling_defect",
    "supp_eps",
]

ExactBox = tuple[tuple[Fraction, Fraction], ...]


def exact(x) -> Fraction:
    """Exact rational value of a number, reading floats as decimal literals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise InvalidRegion(f"non-finite coordinate {x}")
    return Fraction(repr(x))


def _volume(box: ExactBox) -> Fraction:
    v = Fraction(1)
    for lo, hi in box:
        v *= hi - lo
    return v


def _intersection(p: ExactBox, q: ExactBox) -> ExactBox | None:
    out = []
    for (a, b), (c, d) in zip(p, q):
        lo, hi = max(a, c), min(b, d)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


@dataclass(frozen=True)
class RegionUnion:
    """Finite union of closed boxes with pairwise disjoint interiors."""

    dim: int
    boxes: tuple[ExactBox, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidRegion("dimension must be positive")
        boxes = []
        for box in self.boxes:
            box = tuple((exact(lo), exact(hi)) for lo, hi in box)
            if len(box) != self.dim:
                raise InvalidRegion(f"box {box} does not have dimension {self.dim}")
            if any(lo > hi for lo, hi in box):
                raise InvalidRegion(f"empty box {[(float(l), float(u)) for l, u in box]}")
            boxes.append(box)
        boxes.sort()
        for p, q in itertools.combinations(boxes, 2):
            meet = _intersection(p, q)
            if meet is not None and _volume(meet) > 0:
                raise InvalidRegion("boxes overlap in their interiors")
        self._seal(tuple(boxes))

    def _seal(self, boxes):
        object.__setattr__(self, "boxes", boxes)
        lo = np.array([[float(l) for l, _ in b] for b in boxes]).reshape(-1, self.dim)
        hi = np.array([[float(u) for _, u in b] for b in boxes]).reshape(-1, self.dim)
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    @classmethod
    def _trusted(cls, dim: int, boxes: Iterable[ExactBox]) -> "RegionUnion":
        # boxes already exact, nonempty and interior-disjoint
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", dim)
        obj._seal(tuple(sorted(boxes)))
        return obj

    @classmethod
    def intervals(cls, *pairs: Sequence) -> "RegionUnion":
        """One-dimensional union ``RegionUnion.intervals((l1, u1), (l2, u2), ...)``."""
        return cls(1, tuple(((lo, hi),) for lo, hi in pairs))

    # -- serialisation ------------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "RegionUnion":
        try:
            dim = int(doc["dim"])
            boxes = tuple(tuple((lo, hi) for lo, hi in box) for box in doc["boxes"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidRegion(f"malformed region document: {exc}") from exc
        return cls(dim, boxes)

    @classmethod
    def from_json(cls, text: str) -> "RegionUnion":
        return cls.from_dict(json.loads(text, parse_float=Fraction))

    def to_dict(self) -> dict:
        return {"dim": self.dim,
                "boxes": [[[float(lo), float(hi)] for lo, hi in box] for box in self.boxes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    # -- queries ------------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def measure(self) -> Fraction:
        return sum((_volume(b) for b in self.boxes), Fraction(0))

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        if self.is_empty:
            return ((1.0, -1.0),) * self.dim
        return tuple((float(min(b[i][0] for b in self.boxes)), float(max(b[i][1] for b in self.boxes)))
                     for i in range(self.dim))

    def exact_bounding_box(self) -> ExactBox:
        return tuple((min(b[i][0] for b in self.boxes), max(b[i][1] for b in self.boxes))
                     for i in range(self.dim))

    def diameter_inf(self) -> Fraction:
        if self.is_empty:
            return Fraction(0)
        return max(hi - lo for lo, hi in self.exact_bounding_box())

    def inner_radius(self) -> float:
        """Sup-norm distance from the origin to the region."""
        if self.is_empty:
            return math.inf
        best = None
        for box in self.boxes:
            d = max((max(lo, -hi, Fraction(0)) for lo, hi in box))
            best = d if best is None else min(best, d)
        return float(best)

    def outer_radius(self) -> float:
        if self.is_empty:
            return 0.0
        return float(max(max(abs(lo), abs(hi)) for box in self.boxes for lo, hi in box))

    def contains(self, pts) -> np.ndarray:
        """Closed-box membership of an ``(N, dim)`` array (or 1-D array when dim == 1)."""
        pts = np.asarray(pts, dtype=float)
        if self.dim == 1 and pts.ndim == 1:
            pts = pts[:, None]
        hit = np.zeros(len(pts), dtype=bool)
        for lo, hi in zip(self._lo, self._hi):
            hit |= np.all((pts >= lo) & (pts <= hi), axis=1)
        return hit

    def translate(self, k: Sequence) -> "RegionUnion":
        k = [exact(v) for v in k]
        return RegionUnion._trusted(self.dim, (tuple((lo + s, hi + s) for (lo, hi), s in zip(b, k))
                                                for b in self.boxes))

    def scale(self, factor) -> "RegionUnion":
        f = exact(factor)
        if f <= 0:
            raise InvalidParams("scale factor must be positive")
        return RegionUnion._trusted(self.dim, (tuple((lo * f, hi * f) for lo, hi in b)
                                                for b in self.boxes))

    def merged_intervals(self) -> list[tuple[Fraction, Fraction]]:
        """1-D only: the union as a sorted list of maximal closed intervals."""
        if self.dim != 1:
            raise InvalidRegion("merged_intervals is defined for 1-D regions only")
        out: list[list[Fraction]] = []
        for ((lo, hi),) in self.boxes:
            if out and lo <= out[-1][1]:
                out[-1][1] = max(out[-1][1], hi)
            else:
                out.append([lo, hi])
        return [(lo, hi) for lo, hi in out]

    def covers(self, other: "RegionUnion") -> bool:
        """Whether ``other`` is a subset of this region (exact)."""
        if other.dim != self.dim:
            raise InvalidRegion("dimension mismatch")
        cuts = []
        for i in range(self.dim):
            cuts.append(sorted({b[i][0] for b in self.boxes + other.boxes}
                               | {b[i][1] for b in self.boxes + other.boxes}))
        for box in other.boxes:
            axes = []
            for i, (lo, hi) in enumerate(box):
                c = [x for x in cuts[i] if lo <= x <= hi]
                # degenerate extent: a single point
                axes.append([(lo + hi) / 2] if len(c) < 2 else [(u + v) / 2 for u, v in zip(c, c[1:])])
            for centre in itertools.product(*axes):
                if not any(all(lo <= x <= hi for x, (lo, hi) in zip(centre, b)) for b in self.boxes):
                    return False
        return True


# --------------------------------------------------------------------------
# named regions

def annular_square(a) -> RegionUnion:
    """``[-2a, 2a]^2 minus (-a, a)^2`` as four rectangles; requires 0 < a < 1/4."""
    q = exact(a)
    if not (0 < q < Fraction(1, 4)):
        raise InvalidParams(f"annular square needs 0 < a < 1/4, got {a}")
    two = 2 * q
    return RegionUnion(2, (
        ((-two, two), (q, two)),
        ((-two, two), (-two, -q)),
        ((-two, -q), (-q, q)),
        ((q, two), (-q, q)),
    ))


def shannon_set() -> RegionUnion:
    return RegionUnion.intervals((-1, Fraction(-1, 2)), (Fraction(1, 2), 1))


# --------------------------------------------------------------------------
# functionals

def box_distance(p: ExactBox, q: ExactBox) -> Fraction | float:
    """Euclidean distance between two closed boxes; exact when the gap is along one axis."""
    gaps = [max(c - b, a - d, Fraction(0)) for (a, b), (c, d) in zip(p, q)]
    nonzero = [g for g in gaps if g]
    if len(nonzero) <= 1:
        return nonzero[0] if nonzero else Fraction(0)
    return math.sqrt(float(sum(g * g for g in nonzero)))


def _default_k_radius(L: RegionUnion) -> int:
    return math.ceil(L.diameter_inf()) + 1


def _shifts(dim: int, radius: int):
    for k in itertools.product(range(-radius, radius + 1), repeat=dim):
        if any(k):
            yield k


def delta_separation(L: RegionUnion, k_radius: int | None = None) -> float | None:
    """``dist(L, union of L + k over k != 0)``; ``None`` for an empty region.

    Every shift with ``||k||_inf <= k_radius`` is enumerated; the default radius
    ``ceil(diam_inf L) + 1`` provably contains the minimiser.
    """
    if L.is_empty:
        return None
    if k_radius is None:
        k_radius = _default_k_radius(L)
    best = None
    for k in _shifts(L.dim, k_radius):
        for p in L.boxes:
            for q in L.boxes:
                shifted = tuple((lo + s, hi + s) for (lo, hi), s in zip(q, k))
                d = box_distance(p, shifted)
                if best is None or d < best:
                    best = d
                    if best == 0:
                        return 0.0
    return float(best)


def translation_overlap(L: RegionUnion, k_radius: int | None = None) -> float:
    """``max over k != 0`` of the measure of ``L ∩ (L + k)``."""
    if L.is_empty:
        return 0.0
    if k_radius is None:
        k_radius = _default_k_radius(L)
    best = Fraction(0)
    for k in _shifts(L.dim, k_radius):
        total = Fraction(0)
        for p in L.boxes:
            for q in L.boxes:
                shifted = tuple((lo + s, hi + s) for (lo, hi), s in zip(q, k))
                meet = _intersection(p, shifted)
                if meet is not None:
                    total += _volume(meet)
        best = max(best, total)
    return float(best)


@dataclass(frozen=True)
class TilingDefect:
    under_fraction: float
    over_fraction: float
    samples: int
    n_range: tuple[int, int]


def tiling_n_range(L: RegionUnion, grid: DyadicAnnulusGrid) -> tuple[int, int]:
    """All ``n`` for which ``2**n L`` can meet the annulus of ``grid``."""
    r, R = L.inner_radius(), L.outer_radius()
    if L.is_empty or R == 0:
        raise DegenerateRegion("region is empty")
    if r == 0:
        raise DegenerateRegion("region touches the origin; pass n_range explicitly")
    s_lo, s_hi = grid.sup_norm_range()
    return math.floor(math.log2(s_lo / R)), math.ceil(math.log2(s_hi / r))


def dyadic_tiling_defect(L: RegionUnion, grid: DyadicAnnulusGrid,
                         n_range: tuple[int, int] | None = None) -> TilingDefect:
    """Sampled multiplicity of the dyadic dilates ``2**n L`` on an annulus.

    ``under_fraction`` is the share of samples covered by no dilate,
    ``over_fraction`` the share covered by two or more.
    """
    if L.dim != grid.dimension:
        raise DegenerateRegion("region and grid dimensions differ")
    if L.is_empty or L.measure() == 0:
        raise DegenerateRegion("region has zero measure")
    if n_range is None:
        n_range = tiling_n_range(L, grid)
    n_lo, n_hi = n_range
    under = over = total = 0
    for pts in grid.chunks():
        count = np.zeros(len(pts), dtype=np.int64)
        for n in range(n_lo, n_hi + 1):
            count += L.contains(pts * 2.0 ** (-n))
        under += int(np.sum(count == 0))
        over += int(np.sum(count >= 2))
        total += len(pts)
    return TilingDefect(under / total, over / total, total, (n_lo, n_hi))


def supp_eps(p, eps: float, samples_per_dim: int = 256) -> RegionUnion:
    """Grid cover of the superlevel set ``{|p| > eps}``.

    The support box of ``p`` is cut into ``samples_per_dim`` cells per axis; a
    cell is kept whenever ``|p|`` at its centre exceeds ``eps``.  Kept cells are
    merged into runs along the last axis.
    """
    if not eps > 0:
        raise InvalidParams("eps must be positive")
    if not p.bounded:
        raise InvalidParams("profile support must be bounded")
    n, d = int(samples_per_dim), p.dim
    edges = [np.linspace(lo, hi, n + 1) for lo, hi in p.support]
    centres = [0.5 * (e[:-1] + e[1:]) for e in edges]
    q_edges = [[exact(v) for v in e] for e in edges]
    boxes = []
    head_axes = centres[:-1]
    for head in itertools.product(*[range(n)] * (d - 1)):
        pts = np.empty((n, d))
        for i, j in enumerate(head):
            pts[:, i] = head_axes[i][j]
        pts[:, -1] = centres[-1]
        keep = np.abs(p.evaluate(pts)) > eps
        if not keep.any():
            continue
        prefix = tuple((q_edges[i][j], q_edges[i][j + 1]) for i, j in enumerate(head))
        idx = np.flatnonzero(keep)
        # split into maximal runs of consecutive cells
        breaks = np.flatnonzero(np.diff(idx) > 1)
        starts = np.concatenate([[idx[0]], idx[breaks + 1]])
        stops = np.concatenate([idx[breaks], [idx[-1]]])
        for s, t in zip(starts, stops):
            boxes.append(prefix + ((q_edges[-1][s], q_edges[-1][t + 1]),))
    return RegionUnion._trusted(d, boxes)
