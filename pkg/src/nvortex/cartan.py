"""Lie-algebra valued forms over the abstract basis (t0, t+, t-).

Structure constants depend on the curvature sign ``C``:

    [t0, t+] = -i t+,   [t0, t-] = i t-,   [t+, t-] = -2i C t0

so ``C = 1`` gives su(2), ``C = -1`` gives su(1,1) and ``C = 0`` the
non-semisimple contraction.  Coefficients are kept separately rather
than as matrices, which keeps ``C = 0`` faithful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MixedAlgebra
from .geometry import SurfaceSpec, coframe, spin_connection
from .jets import OneForm, TwoForm, exterior_d, wedge
from .vortex import GaugePair, VortexSolution, residual_selfdual, residual_vortex2

COMPONENTS = ("a0", "ap", "am")


@dataclass(frozen=True)
class LieValue:
    a0: complex
    ap: complex
    am: complex
    C: int = 1

    def __post_init__(self):
        if self.C not in (-1, 0, 1):
            raise ValueError(f"structure constant C must be -1, 0 or 1, got {self.C}")

    @classmethod
    def basis(cls, name: str, C: int = 1) -> LieValue:
        coeffs = {k: (1.0 if k == name else 0.0) for k in COMPONENTS}
        return cls(C=C, **coeffs)

    def as_tuple(self) -> tuple:
        return (self.a0, self.ap, self.am)

    def __add__(self, other: LieValue) -> LieValue:
        _same_algebra(self.C, other.C)
        return LieValue(self.a0 + other.a0, self.ap + other.ap, self.am + other.am, self.C)

    def scale(self, k) -> LieValue:
        return LieValue(k * self.a0, k * self.ap, k * self.am, self.C)

    def to_matrix(self) -> np.ndarray:
        """2x2 representation; faithful only for C = +-1."""
        t0, tp, tm = basis_matrices(self.C)
        return self.a0 * t0 + self.ap * tp + self.am * tm


def _same_algebra(c1: int, c2: int) -> None:
    if c1 != c2:
        raise MixedAlgebra(f"cannot combine elements with C={c1} and C={c2}")


def bracket(x: LieValue, y: LieValue) -> LieValue:
    _same_algebra(x.C, y.C)
    C = x.C
    a0 = -2j * C * (x.ap * y.am - x.am * y.ap)
    ap = -1j * (x.a0 * y.ap - x.ap * y.a0)
    am = 1j * (x.a0 * y.am - x.am * y.a0)
    return LieValue(a0, ap, am, C)


def basis_matrices(C: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t0 = np.diag([-0.5j, 0.5j])
    tp = np.array([[0, -1j * C], [0, 0]])
    tm = np.array([[0, 0], [-1j, 0]])
    return t0, tp, tm


def hermitian_basis_matrices(C: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """t0, t1 = (t+ + t-)/2, t2 = (t+ - t-)/(2i); for C = 1 these are -(i/2) Pauli matrices."""
    t0, tp, tm = basis_matrices(C)
    return t0, (tp + tm) / 2, (tp - tm) / 2j


# --- forms ----------------------------------------------------------------------


@dataclass(frozen=True)
class LieValuedOneForm:
    t0: OneForm
    tp: OneForm
    tm: OneForm
    C: int = 1

    def components(self) -> tuple[OneForm, OneForm, OneForm]:
        return (self.t0, self.tp, self.tm)

    def __add__(self, other: LieValuedOneForm) -> LieValuedOneForm:
        _same_algebra(self.C, other.C)
        return LieValuedOneForm(self.t0 + other.t0, self.tp + other.tp, self.tm + other.tm, self.C)

    def reality_residual(self) -> np.ndarray:
        """max |t0 - conj t0|, |t+ - conj t-| over both dz and dzbar slots."""
        out = []
        for p, q in ((self.t0, self.t0), (self.tp, self.tm)):
            pa, pb = p.values
            qa, qb = q.conj().values
            out += [np.abs(pa - qa), np.abs(pb - qb)]
        return np.max(np.stack([np.broadcast_to(o, np.shape(out[0])) for o in out]), axis=0)


@dataclass(frozen=True)
class LieValuedTwoForm:
    t0: TwoForm
    tp: TwoForm
    tm: TwoForm
    C: int = 1

    def components(self) -> tuple[TwoForm, TwoForm, TwoForm]:
        return (self.t0, self.tp, self.tm)

    def magnitude(self) -> np.ndarray:
        """Largest absolute dz ^ dzbar coefficient over the three components."""
        return np.max(np.stack([np.abs(np.asarray(c.c)) for c in self.components()]), axis=0)

    def reality_residual(self) -> np.ndarray:
        r0 = np.abs(np.asarray(self.t0.c) - np.asarray(self.t0.conj().c))
        rp = np.abs(np.asarray(self.tp.c) - np.asarray(self.tm.conj().c))
        return np.maximum(r0, rp)


def wedge_bracket(x: LieValuedOneForm, y: LieValuedOneForm) -> LieValuedTwoForm:
    """[x ^ y] = sum_ij (x_i ^ y_j) [t_i, t_j]; the curvature uses half of [A ^ A]."""
    _same_algebra(x.C, y.C)
    C = x.C
    acc = [0.0, 0.0, 0.0]
    for i, xi in zip(COMPONENTS, x.components()):
        for j, yj in zip(COMPONENTS, y.components()):
            b = bracket(LieValue.basis(i, C), LieValue.basis(j, C)).as_tuple()
            if not any(b):
                continue
            w = wedge(xi, yj).c
            for k in range(3):
                if b[k]:
                    acc[k] = acc[k] + b[k] * w
    return LieValuedTwoForm(TwoForm(acc[0]), TwoForm(acc[1]), TwoForm(acc[2]), C)


def curvature(conn: LieValuedOneForm) -> LieValuedTwoForm:
    """F = dA + (1/2)[A ^ A]; coefficients must carry first derivatives."""
    half = wedge_bracket(conn, conn)
    d = [exterior_d(c) for c in conn.components()]
    return LieValuedTwoForm(
        TwoForm(d[0].c + 0.5 * np.asarray(half.t0.c)),
        TwoForm(d[1].c + 0.5 * np.asarray(half.tp.c)),
        TwoForm(d[2].c + 0.5 * np.asarray(half.tm.c)),
        conn.C,
    )


# --- the connections ------------------------------------------------------------


def ahat(spec: SurfaceSpec, p) -> LieValuedOneForm:
    """-Gamma t0 + (i/2) L (e t- - ebar t+) with leg factor L = sqrt(n) when normalised."""
    gamma = spin_connection(spec, p)
    e = coframe(spec, p)
    leg = 0.5j * spec.leg_scale
    return LieValuedOneForm(-gamma, e.conj().scale(-leg), e.scale(leg), spec.curvature_sign)


def pullback_ahat(sol: VortexSolution, p, pair: GaugePair | None = None) -> LieValuedOneForm:
    """-(nA + Gamma0) t0 + (i/2) L (phi_n e0 t- - conj(phi_n) ebar0 t+).

    ``pair`` substitutes other fields (e.g. a perturbed configuration).
    """
    fam = sol.family
    src = fam.source
    pair = pair or sol.gauge_pair()
    a = pair.A(p)
    phi = pair.phi_n(p)
    gamma0 = spin_connection(src, p)
    e0 = coframe(src, p)
    leg = 0.5j * src.leg_scale
    tm = e0.scale(phi).scale(leg)
    return LieValuedOneForm(-(a.scale(sol.n) + gamma0), tm.conj(), tm, fam.C2n)


def pullback_ahat_direct(sol: VortexSolution, p) -> tuple[np.ndarray, ...]:
    """Values of f*A-hat from the target forms and the chain rule df = f' dz.

    Returns (dz, dzbar) coefficient arrays for t0, t+, t- in that order.
    """
    p = np.asarray(p, complex)
    sol.check(p)
    fam = sol.family
    w = sol.map(p)
    fp = sol.map.derivative()(p)
    target = ahat(fam.target, w)
    out = []
    for comp in target.components():
        a, b = comp.values
        out += [a * fp, b * np.conj(fp)]
    return tuple(out)


def decomposition(sol: VortexSolution, p, pair: GaugePair | None = None) -> dict[str, np.ndarray]:
    """Curvature components beside the multiples of the Abelian residuals they should equal.

    t0 = -n * (vortex-2 residual) and t- = (i/2) L * (self-dual residual),
    where L is the leg factor of the source surface.
    """
    F = curvature(pullback_ahat(sol, p, pair))
    leg = sol.family.source.leg_scale
    return {
        "t0": np.asarray(F.t0.c),
        "t0_expected": -sol.n * residual_vortex2(sol, p, pair),
        "tm": np.asarray(F.tm.c),
        "tm_expected": 0.5j * leg * residual_selfdual(sol, p, pair),
        "tp": np.asarray(F.tp.c),
    }


def matrix_bracket_residual(x: LieValue, y: LieValue) -> float:
    """Compare the abstract bracket with the matrix commutator (C = +-1)."""
    mx, my = x.to_matrix(), y.to_matrix()
    return float(np.max(np.abs(mx @ my - my @ mx - bracket(x, y).to_matrix())))


__all__ = [
    "LieValue",
    "LieValuedOneForm",
    "LieValuedTwoForm",
    "ahat",
    "basis_matrices",
    "bracket",
    "curvature",
    "decomposition",
    "hermitian_basis_matrices",
    "matrix_bracket_residual",
    "pullback_ahat",
    "pullback_ahat_direct",
    "wedge_bracket",
]
