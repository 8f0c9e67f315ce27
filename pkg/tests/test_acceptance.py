"""Acceptance suite: one or more tests per numbered criterion.

A per-criterion PASS/FAIL line is printed in the terminal summary
(see ``conftest.py``). Tolerances are the stated ones; nothing here is loosened.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from framelab.constructions import (MollifierSpec, bump_psi_m, convolve_indicator, f_profile, f_profile_la,
                                    g_profile, h_profile, half_annulus, han_psi_delta, radial_profile)
from framelab.frames import frame_bound_report, kappa, kappa_extrema, kappa_values
from framelab.grids import DyadicAnnulusGrid
from framelab.profiles import dilate, interval_bump, theta, theta_prime
from framelab.regions import RegionUnion, annular_square, delta_separation, dyadic_tiling_defect, shannon_set

SHANNON_SCALED = [(1 / 8, 1 / 4), (-1 / 4, -1 / 8)]
JOURNE_SCALED = [(1 / 4, 2 / 7), (1 / 28, 1 / 16), (-1 / 16, -1 / 28), (-2 / 7, -1 / 4)]
A2, D2 = 0.2, 0.04
BUMP_MS = (50, 100, 200, 400)
CONV_MS = (64, 128, 256, 512)


def _strip(a, delta, n):
    xs = (np.arange(n) + 0.5) * (a - delta / 2) / n
    ys = a - delta / 2 + (np.arange(n) + 0.5) * delta / n
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel()])


def _bump_bounds(m, refine=1):
    p = bump_psi_m(0.25, m)
    return kappa_extrema(p, DyadicAnnulusGrid.for_profile(p, 0.25).refined(refine))


def _conv_bounds(m, refine=1):
    p = convolve_indicator(half_annulus(0.25), MollifierSpec.box(), m)
    return kappa_extrema(p, DyadicAnnulusGrid.for_profile(p, 0.25).refined(refine))


def test_criterion_01_theta_identity():
    x = np.linspace(-2, 2, 100_000)
    assert np.max(np.abs(theta(x) ** 2 + theta(-x) ** 2 - 1)) <= 1e-12


def test_criterion_02_interval_bump_identities():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.uniform(-1, 1)
        len1, len2 = rng.uniform(0.1, 1, size=2)
        b, c = a + len1, a + len1 + len2
        d2 = rng.uniform(0.05, 0.45) * min(len1, len2)
        d1 = rng.uniform(0.05, 0.95) * (len1 - d2)
        d3 = rng.uniform(0.05, 0.95) * (len2 - d2)
        x = np.linspace(a - d1 - 0.1, c + d3 + 0.1, 10_000)
        whole = interval_bump((a, c), d1, d3)(x) ** 2
        parts = interval_bump((a, b), d1, d2)(x) ** 2 + interval_bump((b, c), d2, d3)(x) ** 2
        assert np.max(np.abs(parts - whole)) <= 1e-12

        k = int(rng.integers(-4, 5))
        s = 2.0**k
        p = interval_bump((a, b), d1, d2)
        q = interval_bump((s * a, s * b), s * d1, s * d2)
        y = np.linspace(s * (a - len1), s * (b + len1), 10_000)
        assert np.max(np.abs(dilate(p, -k)(y) - q(y))) <= 1e-12


@pytest.mark.parametrize("family,delta,a", [(SHANNON_SCALED, 1 / 32, 1 / 8), (JOURNE_SCALED, 0.01, 1 / 7)],
                         ids=["shannon", "journe"])
def test_criterion_03_han_families(family, delta, a):
    r = frame_bound_report(han_psi_delta(family, delta), DyadicAnnulusGrid(a, 4096))
    assert max(abs(r.K_lower - 1), abs(r.K_upper - 1)) <= 1e-9
    assert r.cross_terms_vanish


def test_criterion_04_h_strip():
    h = h_profile(A2, D2)
    xs = np.linspace(0, A2 - D2 / 2, 1024)
    line = kappa_values(h, np.column_stack([xs, np.full_like(xs, A2)]))
    assert np.max(np.abs(line - (2 - math.sqrt(2)))) <= 1e-9
    assert kappa_values(h, _strip(A2, D2, 1024)).min() == pytest.approx(0.5, abs=2e-3)


def test_criterion_05_g_squares():
    g = g_profile(A2, D2)
    assert kappa(g, (A2, A2)) == pytest.approx(0.5, abs=1e-9)
    pts = DyadicAnnulusGrid(A2, 512, 2).points()
    X, Y = np.abs(pts[:, 0]), np.abs(pts[:, 1])
    on = np.zeros(len(pts), dtype=bool)
    for m in range(-4, 5):
        lo, hi = 2.0**m * (A2 - D2 / 2), 2.0**m * (A2 + D2 / 2)
        on |= (X >= lo) & (X <= hi) & (Y >= lo) & (Y <= hi)
    assert np.max(np.abs(kappa_values(g, pts[~on]) - 1)) <= 1e-9


@pytest.mark.parametrize("a,d", [(0.2, 0.04), (0.125, 0.02)])
def test_criterion_06_f_parseval(a, d):
    lo, hi = kappa_extrema(f_profile_la(a, d), DyadicAnnulusGrid(a, 512, 2))
    assert max(abs(lo - 1), abs(hi - 1)) <= 1e-9


def test_criterion_06_two_scale_identity():
    f, rhs = f_profile(2 * A2, A2, D2, D2 / 2), f_profile(2 * A2, A2 / 2, D2, D2 / 4)
    ax = (np.arange(512) + 0.5) * (2 * A2 + D2) / 512
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    assert np.max(np.abs(f.evaluate(pts) ** 2 + f.evaluate(2 * pts) ** 2 - rhs.evaluate(pts) ** 2)) <= 1e-12


def test_criterion_06_cusp():
    f = f_profile_la(A2, D2)
    x0, y0 = 2 * A2, 2 * A2 - D2

    def slope(side):
        vals = []
        for s in (1e-4, 1e-5):
            y, h = y0 + side * s, s / 10
            vals.append((f((x0, y + h)) - f((x0, y - h))) / (2 * h))
        return (1e-4 * vals[1] - 1e-5 * vals[0]) / (1e-4 - 1e-5)

    jump = abs(slope(+1) - slope(-1))
    assert jump >= 0.3 / D2
    assert jump == pytest.approx(theta_prime(0.0) / D2, rel=1e-3)


@pytest.mark.parametrize("d,n", [(2, 512), (3, 128)])
def test_criterion_07_radial(d, n):
    lo, hi = kappa_extrema(radial_profile(0.2, 0.05, d), DyadicAnnulusGrid(0.2, n, d, "euclid"))
    assert max(abs(lo - 1), abs(hi - 1)) <= 1e-9


@pytest.mark.parametrize("m", [30, 100])
def test_criterion_08_bump_values(m):
    a = 0.25
    p = bump_psi_m(a, m)
    assert abs(kappa(p, a) - 0.5) <= 1e-12
    assert abs(kappa(p, a - 1 / m) - (1 + (1 / (1 + math.exp(4 * m / 3))) ** 2)) <= 1e-12
    assert abs(kappa(p, a + 1 / m) - (1 / (1 + math.exp(-4 * m / 3))) ** 2) <= 1e-12


def test_criterion_09_upper_bound_small():
    excess = {m: _bump_bounds(m)[1] - 1 for m in BUMP_MS}
    assert all(e <= 1e-12 for e in excess.values()), excess


def test_criterion_09_trends():
    bounds = [_bump_bounds(m) for m in BUMP_MS]
    excess = [hi - 1 for _, hi in bounds]
    assert all(x >= y for x, y in zip(excess, excess[1:]))
    for lo, _ in bounds:
        assert lo <= 0.5
        assert lo == pytest.approx(0.4543, abs=2e-3)


@pytest.mark.parametrize("m", CONV_MS)
def test_criterion_10_frame_gap(m):
    lo, hi = _conv_bounds(m)
    assert abs(hi - 17 / 16) <= 2e-3
    assert abs(lo - 0.45) <= 2e-3


def test_criterion_11_geometry():
    assert delta_separation(RegionUnion.intervals((-0.2, -0.1), (0.1, 0.2))) == 0.6
    assert delta_separation(shannon_set()) == 0
    assert delta_separation(annular_square(0.2)) == 0.2
    for region, grid in [(shannon_set(), DyadicAnnulusGrid(0.5, 4096)),
                         (annular_square(0.2), DyadicAnnulusGrid(0.2, 512, 2))]:
        d = dyadic_tiling_defect(region, grid)
        bound = 4 / math.sqrt(d.samples)
        assert d.under_fraction <= bound and d.over_fraction <= bound


_CONVERGENCE = {
    "han-shannon": lambda r: kappa_extrema(han_psi_delta(SHANNON_SCALED, 1 / 32), DyadicAnnulusGrid(1 / 8, 4096 * r)),
    "han-journe": lambda r: kappa_extrema(han_psi_delta(JOURNE_SCALED, 0.01), DyadicAnnulusGrid(1 / 7, 4096 * r)),
    "h": lambda r: kappa_extrema(h_profile(A2, D2), DyadicAnnulusGrid(A2, 512 * r, 2)),
    "h-strip": lambda r: (kappa_values(h_profile(A2, D2), _strip(A2, D2, 1024 * r)).min(),) * 2,
    "g": lambda r: kappa_extrema(g_profile(A2, D2), DyadicAnnulusGrid(A2, 512 * r, 2)),
    "f-0.2": lambda r: kappa_extrema(f_profile_la(0.2, 0.04), DyadicAnnulusGrid(0.2, 512 * r, 2)),
    "f-0.125": lambda r: kappa_extrema(f_profile_la(0.125, 0.02), DyadicAnnulusGrid(0.125, 512 * r, 2)),
    "radial-2": lambda r: kappa_extrema(radial_profile(0.2, 0.05, 2), DyadicAnnulusGrid(0.2, 512 * r, 2, "euclid")),
    "radial-3": lambda r: kappa_extrema(radial_profile(0.2, 0.05, 3), DyadicAnnulusGrid(0.2, 128 * r, 3, "euclid")),
    **{f"bump-{m}": (lambda r, m=m: _bump_bounds(m, r)) for m in BUMP_MS},
    **{f"convolved-{m}": (lambda r, m=m: _conv_bounds(m, r)) for m in CONV_MS},
}


@pytest.mark.slow
@pytest.mark.parametrize("case", list(_CONVERGENCE))
def test_criterion_12_grid_convergence(case):
    base, fine = _CONVERGENCE[case](1), _CONVERGENCE[case](2)
    assert abs(base[0] - fine[0]) < 1e-3 and abs(base[1] - fine[1]) < 1e-3, (base, fine)
