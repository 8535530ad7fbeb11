"""Vortex magnetic modes on the group H_C0 (C0 = +-1) and their pullback to R^3.

For spinors of the form (Phi, 0) the Dirac equation on the group reduces
to two component equations along X0 and X+.  The mode's connection is
A' = A + (3/4) sigma0, so only its X0 component shifts.

The fields are carried as Phi^n; Phi itself is the principal branch of
(Phi^n)^(1/n) and X Phi = Phi X(Phi^n) / (n Phi^n) away from zeros.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cartan import hermitian_basis_matrices
from .errors import InvalidConfiguration, OnRemovedFibre, OutsideRegion, SingularPoint
from .lift import (
    REMOVED_FIBRE_TOL,
    GroupPoint,
    VortexLift,
    _configuration_jets,
    _d_on_frame,
    apply_field,
    maurer_cartan,
)

MODE_SHIFT = 0.75


@dataclass(frozen=True)
class Spinor:
    up: np.ndarray
    down: np.ndarray


@dataclass(frozen=True)
class R3Point:
    x0: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    C0: int = 1

    def __post_init__(self):
        if self.C0 not in (-1, 1):
            raise ValueError("R^3 points need C0 = +-1")
        for k in ("x0", "x1", "x2"):
            object.__setattr__(self, k, np.asarray(getattr(self, k), float))

    @property
    def r2(self) -> np.ndarray:
        return self.C0 * self.x0**2 + self.x1**2 + self.x2**2

    def in_region(self) -> np.ndarray:
        return 1.0 + self.C0 * self.r2 > 0


def _require_region(x: R3Point) -> np.ndarray:
    if not np.all(x.in_region()):
        raise OutsideRegion("point outside the region C0 r^2 > -1")
    return 1.0 + x.C0 * x.r2


def h_map(x: R3Point) -> np.ndarray:
    d = _require_region(x)
    c, r2 = x.C0, x.r2
    m = np.empty(np.shape(d) + (2, 2), complex)
    m[..., 0, 0] = 1 - c * r2 + 2j * x.x0
    m[..., 0, 1] = 2j * c * (x.x1 - 1j * x.x2)
    m[..., 1, 0] = 2j * (x.x1 + 1j * x.x2)
    m[..., 1, 1] = 1 - c * r2 - 2j * x.x0
    return m / d[..., None, None]


def g_map(x: R3Point) -> np.ndarray:
    d = _require_region(x)
    t0, t1, t2 = hermitian_basis_matrices(x.C0)
    xt = x.x0[..., None, None] * t0 + x.x1[..., None, None] * t1 + x.x2[..., None, None] * t2
    return (np.eye(2) - 2 * xt) / np.sqrt(d)[..., None, None]


def h_point(x: R3Point) -> GroupPoint:
    m = h_map(x)
    return GroupPoint(m[..., 0, 0], m[..., 1, 0], x.C0)


def h_column_derivatives(x: R3Point) -> list[tuple[np.ndarray, np.ndarray]]:
    """d(z1, z2)/dx_i for the first column of H."""
    d = _require_region(x)
    c = x.C0
    num1 = 1 - c * x.r2 + 2j * x.x0
    num2 = 2j * (x.x1 + 1j * x.x2)
    out = []
    for i, (xi, ci) in enumerate(((x.x0, c), (x.x1, 1.0), (x.x2, 1.0))):
        dr2 = 2 * ci * xi
        dd = c * dr2
        dn1 = -c * dr2 + (2j if i == 0 else 0)
        dn2 = {0: 0.0, 1: 2j, 2: -2.0}[i]
        out.append(((dn1 * d - num1 * dd) / d**2, (dn2 * d - num2 * dd) / d**2))
    return out


# --- modes ---------------------------------------------------------------------


@dataclass(frozen=True)
class MagneticMode:
    """Psi = (Phi, 0) with connection A' = A + shift * sigma0."""

    lift: VortexLift
    shift: float = MODE_SHIFT

    @property
    def n(self) -> float:
        return self.lift.n

    def spinor(self, g: GroupPoint) -> Spinor:
        cfg = self.lift.configuration(g)
        return Spinor(cfg.phi, np.zeros_like(cfg.phi))

    def aprime(self, g: GroupPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        cfg = self.lift.configuration(g)
        return cfg.A0.v + self.shift, cfg.Ap.v, cfg.Am.v

    def aprime_on_tangent(self, g: GroupPoint, t) -> np.ndarray:
        _, sig0, _ = maurer_cartan(g, t)
        return self.lift.connection_on_tangent(g, t) + self.shift * sig0


def vortex_magnetic_mode(lift: VortexLift, check_at: GroupPoint | None = None, tol: float = 1e-7) -> MagneticMode:
    """Psi = (Phi, 0), A' = A + (3/4) sigma0 for an upstairs vortex configuration.

    If ``check_at`` is given the configuration equations are verified
    there first.
    """
    if lift.C0 == 0:
        raise InvalidConfiguration("magnetic modes need C0 = +-1")
    if check_at is not None:
        res = lift.residuals(check_at)
        worst = max(float(np.max(np.abs(v))) for v in res.values())
        if not worst < tol:
            raise InvalidConfiguration(f"not a vortex configuration (residual {worst:.3g})")
    return MagneticMode(lift)


def _log_derivatives(mode: MagneticMode, g: GroupPoint):
    phi_n, a, fields = _configuration_jets(mode.lift.U, g, mode.n)
    if np.any(np.abs(phi_n.v) == 0):
        raise SingularPoint("Phi vanishes; component residuals use X(Phi^n)/Phi^n")
    dlog = {k: apply_field(fields[k], phi_n).v / (mode.n * phi_n.v) for k in ("X0", "Xp")}
    return phi_n, a, fields, dlog


def dirac_residual(mode: MagneticMode, g: GroupPoint) -> tuple[np.ndarray, np.ndarray]:
    """(X0 Phi + i A'0 Phi - (3i/4) Phi,  X+ Phi + i A'+ Phi)."""
    if np.any(np.abs(g.z1) < REMOVED_FIBRE_TOL):
        raise OnRemovedFibre("mode undefined on the fibre z1 = 0")
    phi_n, a, _, dlog = _log_derivatives(mode, g)
    phi = phi_n.v ** (1.0 / mode.n)
    r0 = phi * (dlog["X0"] + 1j * (a["X0"].v + mode.shift) - 0.75j)
    rp = phi * (dlog["Xp"] + 1j * a["Xp"].v)
    return r0, rp


# (sigma1 ^ sigma2)(X+, X-) = -2i, since conj(sigma) ^ sigma = 2i sigma1 ^ sigma2
S12_ON_PM = -2j


def curvature_identity_sides(mode: MagneticMode, g: GroupPoint, rhs_scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """sigma1 ^ sigma2 coefficients of F_A' and of the right-hand side.

    F_A' is computed from A' directly on the frame (which reproduces
    F_A + (3/4) C0 sigma2 ^ sigma1).  The right-hand side is
    C0/(4n) - (C2n/n) |Phi|^{2n}, using the stated value of the
    spinor term for spinors of the form (Phi, 0).  ``rhs_scale``
    multiplies the |Phi|^{2n} term (sensitivity checks).
    """
    lift = mode.lift
    phi_n, a, fields = _configuration_jets(lift.U, g, mode.n)
    ap = dict(a)
    ap["X0"] = a["X0"] + mode.shift
    lhs = _d_on_frame(ap, fields, "Xp", "Xm", lift.C0) / S12_ON_PM
    rhs = lift.C0 / (4 * mode.n) - rhs_scale * lift.C2n * np.abs(phi_n.v) ** 2 / mode.n
    return lhs, rhs


def curvature_identity_residual(mode: MagneticMode, g: GroupPoint, rhs_scale: float = 1.0) -> np.ndarray:
    """Largest curvature-identity mismatch over the frame pairs.

    The (X0, X+-) pairs must vanish on both sides; the (X+, X-) pair
    carries the sigma1 ^ sigma2 coefficient.
    """
    lhs, rhs = curvature_identity_sides(mode, g, rhs_scale)
    phi_n, a, fields = _configuration_jets(mode.lift.U, g, mode.n)
    ap = dict(a)
    ap["X0"] = a["X0"] + mode.shift
    off = [np.abs(_d_on_frame(ap, fields, "X0", k, mode.lift.C0)) for k in ("Xp", "Xm")]
    return np.maximum(np.abs(lhs - rhs), np.maximum(*off))


# --- pullback to R^3 -------------------------------------------------------------


@dataclass(frozen=True)
class R3Mode:
    psi: Spinor
    a: tuple[np.ndarray, np.ndarray, np.ndarray]


def pullback_mode(mode: MagneticMode, x: R3Point, omega) -> R3Mode:
    """Psi_H = omega(x)^{-1} G(x) (Phi(H(x)), 0) and the components of H*A' along dx_i.

    ``omega`` maps an :class:`R3Point` to the scalar conformal factor.
    """
    if mode.lift.C0 != x.C0:
        raise ValueError("mode and point live on different groups")
    g = h_point(x)
    if np.any(np.abs(g.z1) < REMOVED_FIBRE_TOL):
        raise OnRemovedFibre("H(x) lies on the removed fibre")
    G = g_map(x)
    phi = mode.lift.configuration(g).phi
    w = np.asarray(omega(x))
    psi = Spinor(G[..., 0, 0] * phi / w, G[..., 1, 0] * phi / w)
    comps = []
    for dz1, dz2 in h_column_derivatives(x):
        t = (dz1, dz2, np.conj(dz1), np.conj(dz2))
        comps.append(np.real(mode.aprime_on_tangent(g, t)))
    return R3Mode(psi, tuple(comps))


__all__ = [
    "MagneticMode",
    "R3Mode",
    "R3Point",
    "Spinor",
    "curvature_identity_residual",
    "curvature_identity_sides",
    "dirac_residual",
    "g_map",
    "h_column_derivatives",
    "h_map",
    "h_point",
    "pullback_mode",
    "vortex_magnetic_mode",
]
