"""Deterministic sampling of dyadic annuli ``{gamma : a <= ||gamma|| <= 2a}``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidParams

# default points per axis by dimension
DEFAULT_SAMPLES = {1: 4096, 2: 512, 3: 128}
# 1-D grids are cheap; sharp profiles get up to this many points
MAX_SAMPLES_1D = 1 << 21
# points per feature-scale length requested for 1-D auto resolution
POINTS_PER_FEATURE = 128

_CHUNK = 1 << 18


def default_samples(dim: int) -> int:
    return DEFAULT_SAMPLES.get(dim, 64)


@dataclass(frozen=True)
class DyadicAnnulusGrid:
    """Cell-centred sample points on a dyadic annulus.

    In one dimension the grid holds ``samples_per_dim`` points, half on
    ``[a, 2a]`` and half on ``[-2a, -a]``.  In ``d >= 2`` dimensions the cube
    ``[-2a, 2a]^d`` is split into ``samples_per_dim**d`` cells and the centres
    falling inside the annulus (for the chosen norm) are kept.  No sample lies
    on the annulus boundary, so the centres never sit on a dyadic seam of the
    form ``||gamma|| in {a, 2a}``.
    """

    a: float
    samples_per_dim: int
    dimension: int = 1
    norm: str = "inf"

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidParams(f"annulus parameter must be positive, got {self.a}")
        if self.samples_per_dim < 2:
            raise InvalidParams("samples_per_dim must be at least 2")
        if self.dimension < 1:
            raise InvalidParams("dimension must be positive")
        if self.norm not in ("inf", "euclid"):
            raise InvalidParams(f"norm must be 'inf' or 'euclid', got {self.norm!r}")
        if self.dimension > 1 and self.samples_per_dim % 4:
            # keeps cell centres off the coordinates 0, +-a, +-2a
            raise InvalidParams("samples_per_dim must be divisible by 4 in d >= 2")

    @classmethod
    def for_profile(cls, profile, a: float, norm: str = "inf", samples_per_dim: int | None = None):
        """Grid for ``profile`` with a resolution matched to its feature scale.

        Only 1-D grids are refined automatically: a profile such as the
        partition-of-unity bump varies on a length ~1/m**2, far below the
        default pitch.
        """
        d = profile.dim
        if samples_per_dim is None:
            samples_per_dim = default_samples(d)
            if d == 1 and math.isfinite(profile.scale) and profile.scale > 0:
                want = POINTS_PER_FEATURE * 2.0 * a / profile.scale
                want = 1 << max(0, math.ceil(math.log2(max(want, 1.0))))
                samples_per_dim = int(min(max(samples_per_dim, want), MAX_SAMPLES_1D))
        return cls(float(a), int(samples_per_dim), d, norm)

    def refined(self, factor: int = 2) -> "DyadicAnnulusGrid":
        return DyadicAnnulusGrid(self.a, self.samples_per_dim * factor, self.dimension, self.norm)

    @property
    def pitch(self) -> float:
        return 4.0 * self.a / self.samples_per_dim

    def _norm(self, pts: np.ndarray) -> np.ndarray:
        if self.norm == "inf" or self.dimension == 1:
            return np.max(np.abs(pts), axis=1)
        return np.sqrt(np.einsum("ij,ij->i", pts, pts))

    def axis(self) -> np.ndarray:
        n = self.samples_per_dim
        return -2.0 * self.a + (np.arange(n) + 0.5) * (4.0 * self.a / n)

    def chunks(self, size: int = _CHUNK) -> Iterator[np.ndarray]:
        """Yield the sample points as ``(k, d)`` blocks in a fixed order."""
        a, d = self.a, self.dimension
        if d == 1:
            half = self.samples_per_dim // 2
            h = a / half
            pos = a + (np.arange(half) + 0.5) * h
            pts = np.concatenate([-pos[::-1], pos])[:, None]
            for i in range(0, len(pts), size):
                yield pts[i:i + size]
            return
        ax = self.axis()
        n = len(ax)
        rest = n ** (d - 1)
        rows = max(1, size // rest)
        tail = np.stack(np.meshgrid(*([ax] * (d - 1)), indexing="ij"), axis=-1).reshape(-1, d - 1)
        for i in range(0, n, rows):
            head = ax[i:i + rows]
            block = np.concatenate(
                [np.repeat(head, rest)[:, None], np.tile(tail, (len(head), 1))], axis=1)
            r = self._norm(block)
            keep = (r > a) & (r < 2 * a)
            if keep.any():
                yield block[keep]

    def points(self) -> np.ndarray:
        blocks = list(self.chunks())
        if not blocks:
            return np.zeros((0, self.dimension))
        return np.concatenate(blocks)

    def sup_norm_range(self) -> tuple[float, float]:
        """Bounds on ``||gamma||_inf`` over the samples (analytic, conservative)."""
        if self.norm == "inf" or self.dimension == 1:
            return self.a, 2.0 * self.a
        return self.a / math.sqrt(self.dimension), 2.0 * self.a
