"""Exact n-vortex solutions, their Cartan and group-manifold descriptions, and checks."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .geometry import Mode, SurfaceSpec  # noqa: E402
from .jets import GroupJet, Jet2, OneForm, TwoForm  # noqa: E402
from .rational import Poly, RationalMap, find_roots, ramification_points  # noqa: E402
from .vortex import GaugePair, VortexFamily, VortexSolution, winding_number  # noqa: E402

__all__ = [
    "GaugePair",
    "GroupJet",
    "Jet2",
    "Mode",
    "OneForm",
    "Poly",
    "RationalMap",
    "SurfaceSpec",
    "TwoForm",
    "VortexFamily",
    "VortexSolution",
    "__version__",
    "find_roots",
    "ramification_points",
    "winding_number",
]
