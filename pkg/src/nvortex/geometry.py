"""Constant-curvature surfaces: co-frames, spin connections, Kähler forms.

Two conventions are supported.  In ``FIXED`` mode the surface of
curvature sign ``C`` carries the co-frame ``2 dz / (1 + C|z|^2)`` for every
family exponent ``n``.  In ``NORMALISED`` mode the coordinate is
``w = z / sqrt(n)`` and the co-frame is ``2 dw / (1 + n C |w|^2)``, so the
Gauss curvature becomes ``n C``.  Both are handled by a single effective
curvature ``kappa = C`` or ``n C`` entering the denominators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainBoundary
from .jets import Jet2, OneForm, TwoForm, exterior_d, wedge

# below this the conformal denominator counts as vanished
DENOM_FLOOR = 1e-14


class Mode(str, enum.Enum):
    FIXED = "fixed"
    NORMALISED = "normalised"


@dataclass(frozen=True)
class SurfaceSpec:
    curvature_sign: int
    mode: Mode = Mode.FIXED
    n: float = 1.0

    def __post_init__(self):
        if self.curvature_sign not in (-1, 0, 1):
            raise ValueError(f"curvature sign must be -1, 0 or 1, got {self.curvature_sign}")
        if not self.n > 0:
            raise ValueError(f"family exponent must be strictly positive, got {self.n}")
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def kappa(self) -> float:
        """Effective curvature multiplying |z|^2 in the conformal denominator."""
        scale = self.n if self.mode is Mode.NORMALISED else 1.0
        return scale * self.curvature_sign

    @property
    def gauss_curvature(self) -> float:
        return self.kappa

    @property
    def leg_scale(self) -> float:
        """Factor on the co-frame legs of the Cartan connection (sqrt n when normalised)."""
        return float(np.sqrt(self.n)) if self.mode is Mode.NORMALISED else 1.0

    def chart(self) -> ChartDomain:
        if self.kappa < 0:
            return ChartDomain(self.curvature_sign, 1.0 / np.sqrt(-self.kappa))
        return ChartDomain(self.curvature_sign, np.inf)


@dataclass(frozen=True)
class ChartDomain:
    curvature_sign: int
    radius_bound: float

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z)) < self.radius_bound


def conformal_denominator(spec: SurfaceSpec, z) -> Jet2:
    """Jet of 1 + kappa |z|^2; raises :class:`DomainBoundary` where it is not positive."""
    z = np.asarray(z, complex)
    d = 1.0 + spec.kappa * np.abs(z) ** 2
    if np.any(d <= DENOM_FLOOR):
        raise DomainBoundary("point outside the chart: 1 + C|z|^2 <= 0")
    return 1.0 + spec.kappa * (Jet2.coordinate(z) * Jet2.conj_coordinate(z))


def coframe(spec: SurfaceSpec, z) -> OneForm:
    d = conformal_denominator(spec, z)
    return OneForm(2.0 / d, Jet2(np.zeros_like(d.v)))


def spin_connection(spec: SurfaceSpec, z) -> OneForm:
    """Real one-form i kappa (z dzbar - zbar dz) / (1 + kappa |z|^2)."""
    d = conformal_denominator(spec, z)
    z = np.asarray(z, complex)
    zj, zb = Jet2.coordinate(z), Jet2.conj_coordinate(z)
    k = spec.kappa
    return OneForm(-1j * k * zb / d, 1j * k * zj / d)


def kahler_form(spec: SurfaceSpec, z) -> TwoForm:
    e = coframe(spec, z)
    return wedge(e, e.conj()).scale(0.5j)


def structure_residual(spec: SurfaceSpec, z) -> TwoForm:
    """de - i Gamma ^ e, which vanishes identically."""
    e = coframe(spec, z)
    gamma = spin_connection(spec, z)
    return exterior_d(e) - wedge(gamma, e).scale(1j)


def gauss_curvature(spec: SurfaceSpec, z) -> np.ndarray:
    """K extracted from dGamma = (i/2) K e ^ ebar."""
    gamma = spin_connection(spec, z)
    omega = kahler_form(spec, z)
    return np.real(exterior_d(gamma).c / omega.c)


def area_density(spec: SurfaceSpec, z) -> np.ndarray:
    """Kähler form as a density against dx dy."""
    return np.real(kahler_form(spec, z).density())


def pullback_linear(form: OneForm, s: float) -> OneForm:
    """Values of a one-form at z = s w pulled back to the w chart (dz = s dw)."""
    a, b = form.values
    return OneForm(s * a, s * b)


def normalised_consistency(curvature_sign: int, n: float, w) -> dict[str, np.ndarray]:
    """Compare fixed-mode forms pulled back under z = sqrt(n) w with normalised forms.

    The spin connections agree exactly; the fixed co-frame pulls back to
    ``sqrt(n)`` times the normalised co-frame, which is the factor that
    reappears in the section identity ``s* sigma = i sqrt(n) e``.
    """
    w = np.asarray(w, complex)
    s = float(np.sqrt(n))
    fixed = SurfaceSpec(curvature_sign, Mode.FIXED, n)
    norm = SurfaceSpec(curvature_sign, Mode.NORMALISED, n)
    e_pull = pullback_linear(coframe(fixed, s * w), s)
    g_pull = pullback_linear(spin_connection(fixed, s * w), s)
    e_n = coframe(norm, w)
    g_n = spin_connection(norm, w)
    ea, eb = e_pull.values
    na, nb = e_n.values
    ga, gb = g_pull.values
    ha, hb = g_n.values
    return {
        "coframe": np.maximum(np.abs(ea - s * na), np.abs(eb - s * nb)),
        "spin_connection": np.maximum(np.abs(ga - ha), np.abs(gb - hb)),
    }
