"""Exact n-vortex solutions built from rational maps.

The primitive field is ``phi_n`` (the n-th power of the Higgs field),
which stays single valued for non-integer ``n``:

    phi_n = (1 + k0 |z|^2) / (1 + k2 |f|^2) * f'(z)

with ``k0, k2`` the effective curvatures of source and target charts.
The gauge potential is the real one-form whose dzbar component is
``-(i/n) d_zbar log(phi_n)``.  The holomorphic factor ``f'`` drops out of
``d_zbar``, so ``A`` is smooth through the vortex centres.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import (
    DomainBoundary,
    ExcludedRegion,
    PoleAtPoint,
    QuadratureNonConvergence,
    UnsupportedDomain,
)
from .geometry import DENOM_FLOOR, Mode, SurfaceSpec, coframe, conformal_denominator, kahler_form
from .jets import Jet2, OneForm, TwoForm, exterior_d, wedge
from .rational import RationalMap, ramification_points

ADMISSIBLE_NOTE = "(C0, C2n) must satisfy C0 <= C2n so the flux density has non-negative integral"

# Named families at n = 1
NAMED_FAMILIES = {
    "taubes": (-1, -1),
    "jackiw_pi": (0, 1),
    "popov": (1, 1),
    "bradlow": (-1, 0),
    "ambjorn_olesen": (-1, 1),
}


@dataclass(frozen=True)
class VortexFamily:
    C0: int
    C2n: int
    n: float = 1.0
    mode: Mode = Mode.FIXED

    def __post_init__(self):
        for c in (self.C0, self.C2n):
            if c not in (-1, 0, 1):
                raise ValueError(f"curvature constants must lie in {{-1, 0, 1}}, got {c}")
        if not self.n > 0:
            raise ValueError(f"n must be strictly positive, got {self.n}")
        if self.C0 > self.C2n:
            raise ValueError(f"inadmissible pair ({self.C0}, {self.C2n}): {ADMISSIBLE_NOTE}")
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def source(self) -> SurfaceSpec:
        return SurfaceSpec(self.C0, self.mode, self.n)

    @property
    def target(self) -> SurfaceSpec:
        return SurfaceSpec(self.C2n, self.mode, self.n)

    @property
    def rhs_scale(self) -> float:
        """1/n in fixed mode, 1 when normalised."""
        return 1.0 / self.n if self.mode is Mode.FIXED else 1.0


@dataclass(frozen=True)
class GaugePair:
    """Evaluators z -> phi_n jet and z -> A one-form."""

    phi_n: Callable[[np.ndarray], Jet2]
    A: Callable[[np.ndarray], OneForm]


@dataclass(frozen=True)
class VortexSolution:
    family: VortexFamily
    map: RationalMap
    exclusion_radius: float = 1e-2
    # points whose conformal denominators fall below this are left out of sweeps
    domain_margin: float = 1e-2
    exclusions: tuple[tuple[complex, float], ...] = field(default=(), compare=False)
    # optional real gauge function of the coordinate jet: (phi_n e^{i n beta}, A + d beta)
    gauge: Callable[[Jet2], Jet2] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.exclusions:
            centres = [p for p, _ in ramification_points(self.map).points]
            centres += [p for p, _ in self.map.poles()]
            object.__setattr__(self, "exclusions", tuple((complex(c), self.exclusion_radius) for c in centres))

    @property
    def n(self) -> float:
        return self.family.n

    # --- point classification -------------------------------------------
    def excluded(self, z) -> np.ndarray:
        z = np.asarray(z, complex)
        out = np.zeros(z.shape, bool)
        for c, r in self.exclusions:
            out |= np.abs(z - c) < r
        return out

    def in_domain(self, z, margin: float | None = None) -> np.ndarray:
        """Source and target conformal denominators exceed ``margin``."""
        margin = self.domain_margin if margin is None else margin
        z = np.asarray(z, complex)
        d0 = 1.0 + self.family.source.kappa * np.abs(z) ** 2
        ok = d0 > margin
        if np.any(ok):
            safe = np.where(ok, z, 0.0)
            f1 = self.map.f1(safe)
            f2 = self.map.f2(safe)
            pole = np.abs(f1) < 1e-12 * (1 + np.abs(f2))
            fval = np.where(pole, 0.0, f2 / np.where(pole, 1.0, f1))
            dt = 1.0 + self.family.target.kappa * np.abs(fval) ** 2
            ok &= ~pole & (dt > margin)
        return ok

    def valid(self, z) -> np.ndarray:
        return self.in_domain(z) & ~self.excluded(z)

    def check(self, z) -> None:
        z = np.asarray(z, complex)
        if np.any(self.excluded(z)):
            raise ExcludedRegion("point inside an exclusion disc")
        if np.any(~self.in_domain(z, margin=DENOM_FLOOR)):
            raise DomainBoundary("point outside the source or target chart")

    # --- fields -----------------------------------------------------------
    def _denominators(self, z) -> tuple[Jet2, Jet2, Jet2]:
        z = np.asarray(z, complex)
        d0 = conformal_denominator(self.family.source, z)
        f = self.map.eval_jet(z)
        dt = 1.0 + self.family.target.kappa * f.abs2()
        if np.any(dt.v.real <= DENOM_FLOOR):
            raise DomainBoundary("image point outside the target chart")
        return d0, dt, f

    def phi_n(self, z, check: bool = True) -> Jet2:
        if check:
            self.check(z)
        d0, dt, _ = self._denominators(z)
        fp = self.map.derivative().eval_jet(z)
        phi = d0 / dt * fp
        if self.gauge is not None:
            phi = phi * (self._beta(z) * (1j * self.n)).exp()
        return phi

    def _beta(self, z) -> Jet2:
        return self.gauge(Jet2.coordinate(np.asarray(z, complex)))

    def gauge_potential(self, z, check: bool = True) -> OneForm:
        if check:
            self.check(z)
        d0, dt, _ = self._denominators(z)
        # d_zbar log f' = 0, so only the conformal factors contribute
        a_zbar = (d0.log() - dt.log()).d_zbar() * (-1j / self.n)
        a = OneForm(a_zbar.conj(), a_zbar)
        if self.gauge is not None:
            b = self._beta(z)
            a = a + OneForm(b.d_z(), b.d_zbar())
        return a

    def with_gauge(self, beta: Callable[[Jet2], Jet2] | None) -> VortexSolution:
        return VortexSolution(self.family, self.map, self.exclusion_radius, self.domain_margin, self.exclusions, beta)

    def gauge_pair(self) -> GaugePair:
        return GaugePair(self.phi_n, self.gauge_potential)

    def fixed_equivalent(self) -> VortexSolution:
        """The same configuration in fixed-mode coordinates z = sqrt(n) w."""
        if self.family.mode is Mode.FIXED:
            return self
        s = float(np.sqrt(self.n))
        fam = VortexFamily(self.family.C0, self.family.C2n, self.n, Mode.FIXED)
        beta = None if self.gauge is None else (lambda Z, b=self.gauge: b(Z * (1.0 / s)))
        return VortexSolution(fam, self.map.rescaled(1.0 / s), self.exclusion_radius * s, self.domain_margin, gauge=beta)

    def chart_flipped(self) -> VortexSolution:
        """Solution expressed in the opposite sphere charts of source and target."""
        k = self.n if self.family.mode is Mode.NORMALISED else 1.0
        beta = None if self.gauge is None else (lambda U, b=self.gauge: b((U * k).reciprocal()))
        return VortexSolution(self.family, self.map.chart_flip(k), self.exclusion_radius, self.domain_margin, gauge=beta)


# --- residuals ---------------------------------------------------------------


def higgs_field(sol: VortexSolution, z) -> Jet2:
    return sol.phi_n(z)


def gauge_potential(sol: VortexSolution, z) -> OneForm:
    return sol.gauge_potential(z)


def residual_selfdual(sol: VortexSolution, z, pair: GaugePair | None = None) -> np.ndarray:
    """Coefficient of (d phi_n - i n A phi_n) ^ e0 on dz ^ dzbar."""
    pair = pair or sol.gauge_pair()
    p = pair.phi_n(z)
    a = pair.A(z)
    cov = OneForm(p.d_z(), p.d_zbar()) - a.scale(1j * sol.n * p.v)
    return wedge(cov, coframe(sol.family.source, z)).c


def vortex2_rhs(sol: VortexSolution, z, phi_n_value) -> TwoForm:
    fam = sol.family
    coef = (-fam.C0 + fam.C2n * np.abs(phi_n_value) ** 2) * fam.rhs_scale
    return kahler_form(fam.source, z).scale(coef)


def residual_vortex2(sol: VortexSolution, z, pair: GaugePair | None = None) -> np.ndarray:
    """dA minus the curvature-equation right-hand side, on dz ^ dzbar."""
    pair = pair or sol.gauge_pair()
    p = pair.phi_n(z)
    return (exterior_d(pair.A(z)) - vortex2_rhs(sol, z, p.v)).c


def field_strength(sol: VortexSolution, z, pair: GaugePair | None = None) -> TwoForm:
    pair = pair or sol.gauge_pair()
    return exterior_d(pair.A(z))


def baptista_factor(sol: VortexSolution, z) -> np.ndarray:
    """|phi_n|^2, the conformal factor of the Baptista metric over g0."""
    z = np.asarray(z, complex)
    if np.any(~sol.in_domain(z, margin=DENOM_FLOOR)):
        raise PoleAtPoint("baptista factor requested at a pole or outside the chart")
    return np.abs(sol.phi_n(z, check=False).v) ** 2


def gauge_transform(pair: GaugePair, beta: Callable[[np.ndarray], Jet2], n: float) -> GaugePair:
    """(phi, A) -> (e^{i beta} phi, A + d beta), so phi_n picks up e^{i n beta}.

    The sign matches the covariant derivative d - iA used on the surface.
    """

    def phi_n(z):
        return (beta(z) * (1j * n)).exp() * pair.phi_n(z)

    def A(z):
        b = beta(z)
        return pair.A(z) + OneForm(b.d_z(), b.d_zbar())

    return GaugePair(phi_n, A)


# --- sampling grids ---------------------------------------------------------


def disk_grid(resolution: int, radius: float, centre: complex = 0j) -> np.ndarray:
    """Points of a uniform square grid on [-R, R]^2 lying in the closed disc."""
    t = np.linspace(-radius, radius, resolution)
    x, y = np.meshgrid(t, t, indexing="ij")
    z = (x + 1j * y).ravel()
    return centre + z[np.abs(z) <= radius * (1 + 1e-12)]


def default_radius(family: VortexFamily) -> float:
    base = 0.9 if family.C0 < 0 else 3.0
    if family.mode is Mode.NORMALISED:
        base /= np.sqrt(family.n)
    return float(base)


# --- winding number -----------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-8
    angular_start: int = 64
    angular_max: int = 4096
    local_radius: float = 1e-4
    loop_points: int = 512


def flux_density(sol: VortexSolution, z) -> np.ndarray:
    """dA as a density against dx dy, computed from the potential's jets."""
    return np.real(exterior_d(sol.gauge_potential(z, check=False)).density())


def _disc_flux(sol: VortexSolution, radius: float, quad: QuadratureConfig) -> float:
    def total(m: int) -> float:
        theta = 2 * np.pi * np.arange(m) / m
        ring = np.exp(1j * theta)

        def radial(r):
            return r * np.mean(flux_density(sol, r * ring)) * 2 * np.pi

        val, err = integrate.quad(radial, 0.0, radius, epsabs=quad.epsabs, epsrel=0.0, limit=200)
        if err > 10 * quad.epsabs:
            raise QuadratureNonConvergence(f"radial quadrature error estimate {err:.3g}")
        return val

    m = quad.angular_start
    prev = total(m)
    while m < quad.angular_max:
        m *= 2
        cur = total(m)
        if abs(cur - prev) <= quad.epsabs:
            return cur
        prev = cur
    raise QuadratureNonConvergence("angular resolution cap reached")


def winding_number(sol: VortexSolution, quad: QuadratureConfig | None = None) -> float:
    """N = (1/2 pi) * total flux, by two-chart quadrature on the sphere.

    Only compact sources (C0 = 1) have a global flux; use
    :func:`local_windings` on noncompact charts.
    """
    quad = quad or QuadratureConfig()
    if sol.family.C0 != 1:
        raise UnsupportedDomain("global flux needs a compact source surface (C0 = 1)")
    k = sol.n if sol.family.mode is Mode.NORMALISED else 1.0
    radius = 1.0 / np.sqrt(k)
    flux = _disc_flux(sol, radius, quad) + _disc_flux(sol.chart_flipped(), radius, quad)
    return flux / (2 * np.pi)


def local_winding(sol: VortexSolution, centre: complex, radius: float, points: int = 512) -> float:
    """(1/2 pi) * loop integral of (d arg phi_n / n - A) around a small circle.

    Gauge invariant; tends to m/n for a ramification point of multiplicity m
    as the radius shrinks (the enclosed flux is O(radius^2)).
    """
    theta = 2 * np.pi * np.arange(points) / points
    z = centre + radius * np.exp(1j * theta)
    p = sol.phi_n(z, check=False).v
    if np.any(p == 0):
        raise ExcludedRegion("loop passes through a zero of phi_n")
    steps = np.angle(np.roll(p, -1) / p)
    phase = np.sum(steps) / (2 * np.pi)
    a = sol.gauge_potential(z, check=False)
    aa, ab = a.values
    dz = 1j * radius * np.exp(1j * theta)
    hol = np.real(np.mean(aa * dz + ab * np.conj(dz)) * 2 * np.pi)
    return float(phase / sol.n - hol / (2 * np.pi))


@dataclass(frozen=True)
class LocalWinding:
    location: complex
    multiplicity: int
    value: float
    at_infinity: bool = False


def local_windings(sol: VortexSolution, quad: QuadratureConfig | None = None, include_infinity: bool | None = None) -> list[LocalWinding]:
    """Per-vortex windings around every finite ramification point in the chart.

    On the sphere the point at infinity is treated in the flipped chart.
    """
    quad = quad or QuadratureConfig()
    ram = ramification_points(sol.map)
    centres = [c for c, _ in ram.points] + [c for c, _ in sol.map.poles()]
    out = []
    for c, m in ram.points:
        if not sol.in_domain(np.array([c]), margin=DENOM_FLOOR)[0] and not _is_pole(sol, c):
            continue
        others = [abs(c - d) for d in centres if abs(c - d) > 1e-9]
        r = min([quad.local_radius] + [0.3 * d for d in others])
        out.append(LocalWinding(c, m, local_winding(sol, c, r, quad.loop_points)))
    if include_infinity is None:
        include_infinity = sol.family.C0 == 1
    if include_infinity and ram.at_infinity > 0:
        flipped = sol.chart_flipped()
        r = quad.local_radius
        val = local_winding(flipped, 0j, r, quad.loop_points)
        out.append(LocalWinding(complex(np.inf), ram.at_infinity, val, at_infinity=True))
    return out


def _is_pole(sol: VortexSolution, c: complex) -> bool:
    return abs(sol.map.f1(c)) < 1e-9 * max(1.0, sol.map.f1.norm())
