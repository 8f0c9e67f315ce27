"""Smooth Parseval wavelet frame profiles and frame-bound estimation."""

__version__ = "0.1.0"

from .constructions import (HanIntervalFamily, MollifierSpec, bump_psi_m, build, compute_ki,
                            convolve_indicator, f_profile, f_profile_la, g_profile, h_profile,
                            han_psi_delta, radial_profile)
from .errors import FramelabError
from .frames import (FrameBoundReport, TruncationPolicy, cross_terms, frame_bound_report, kappa,
                     kappa_extrema, kappa_values, parseval_check)
from .grids import DyadicAnnulusGrid
from .profiles import (Profile, combine, constant, dilate, indicator, interval_bump, pou_bump,
                       radial_lift, reflect_even, theta, translate)
from .regions import (RegionUnion, annular_square, delta_separation, dyadic_tiling_defect,
                      supp_eps, translation_overlap)

__all__ = [
    "__version__",
    "FramelabError",
    "Profile", "theta", "interval_bump", "pou_bump", "indicator", "constant", "combine",
    "dilate", "translate", "reflect_even", "radial_lift",
    "RegionUnion", "annular_square", "delta_separation", "translation_overlap",
    "dyadic_tiling_defect", "supp_eps",
    "DyadicAnnulusGrid", "TruncationPolicy", "FrameBoundReport", "kappa", "kappa_values",
    "kappa_extrema", "cross_terms", "frame_bound_report", "parseval_check",
    "HanIntervalFamily", "compute_ki", "han_psi_delta", "h_profile", "g_profile", "f_profile",
    "f_profile_la", "radial_profile", "bump_psi_m", "MollifierSpec", "convolve_indicator", "build",
]
