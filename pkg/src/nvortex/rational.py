"""Complex polynomials, rational maps and their ramification points.

Roots are found by Aberth-Ehrlich simultaneous iteration.  Multiple roots
converge only to about ``eps**(1/m)``, so after iteration the estimates
are clustered and each cluster is replaced by its centroid, which is
accurate to roughly machine precision.  Clusters that sit farther apart
than the base radius are merged when the derivative test at the merged
centroid confirms a multiple root.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateMap, NonConvergence, PoleAtPoint
from .jets import Jet2

CLUSTER_RADIUS = 1e-6
MERGE_RADIUS = 1e-2
COPRIME_TOL = 1e-9
POLE_TOL = 1e-12
MAX_ITER = 500


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, complex)).copy()
    scale = np.max(np.abs(c)) if c.size else 0.0
    k = c.size
    while k > 1 and abs(c[k - 1]) <= 1e-15 * scale:
        k -= 1
    return c[:k] if k else np.zeros(1, complex)


@dataclass(frozen=True)
class Poly:
    """Polynomial with complex coefficients in ascending degree."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({[complex(c) for c in self.coeffs]})"

    @property
    def degree(self) -> int:
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return -1
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, z):
        return P.polyval(np.asarray(z, complex), self.coeffs)

    def derivative(self, m: int = 1) -> Poly:
        if self.coeffs.size <= m:
            return Poly([0.0])
        return Poly(P.polyder(self.coeffs, m))

    def __add__(self, other: Poly) -> Poly:
        return Poly(P.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return Poly(P.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other) -> Poly:
        if isinstance(other, Poly):
            return Poly(P.polymul(self.coeffs, other.coeffs))
        return Poly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def jet(self, z) -> Jet2:
        """Holomorphic jet: value, first and second z-derivatives."""
        z = np.asarray(z, complex)
        d1 = self.derivative(1)
        d2 = self.derivative(2)
        return Jet2.from_parts(self(z), dz=d1(z), dzdz=d2(z))

    def padded(self, degree: int) -> np.ndarray:
        out = np.zeros(degree + 1, complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def scaled_argument(self, s: float) -> Poly:
        """p(s z)."""
        return Poly(self.coeffs * s ** np.arange(self.coeffs.size))


# ---------------------------------------------------------------------------
# root finding


def _cauchy_radius(c: np.ndarray) -> float:
    lead = abs(c[-1])
    return 1.0 + float(np.max(np.abs(c[:-1]) / lead)) if c.size > 1 else 1.0


def _aberth(c: np.ndarray, max_iter: int) -> np.ndarray:
    deg = c.size - 1
    dc = P.polyder(c)
    absc = np.abs(c)
    # initial guesses on a circle of the geometric-mean root modulus, offset angle
    rho = (abs(c[0]) / abs(c[-1])) ** (1.0 / deg) if c[0] != 0 else 0.5
    rho = min(max(rho, 1e-3), _cauchy_radius(c))
    z = rho * np.exp(1j * (2 * np.pi * np.arange(deg) / deg + 0.4))
    done = np.zeros(deg, bool)
    for _ in range(max_iter):
        pz = P.polyval(z, c)
        bound = P.polyval(np.abs(z), absc)
        done = np.abs(pz) <= 8 * np.finfo(float).eps * bound
        if np.all(done):
            return z
        dpz = P.polyval(z, dc)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0  # remove the diagonal 1/1 term
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            step = ratio / (1.0 - ratio * s)
        step = np.where(done | ~np.isfinite(step), 0.0, step)
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(np.abs(z), 1.0)):
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} steps")


def _cluster(points: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of indices within ``radius``."""
    n = points.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius * max(1.0, abs(points[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_multiple(c: np.ndarray, x: complex, m: int, radius: float) -> complex | None:
    """Newton on p^(m-1), whose root is simple at an m-fold root of p."""
    dk = P.polyder(c, m - 1) if m > 1 else c
    dk1 = P.polyder(dk)
    x0 = x
    for _ in range(50):
        d = P.polyval(x, dk1)
        if d == 0:
            break
        step = P.polyval(x, dk) / d
        x = x - step
        if abs(x - x0) > radius * max(1.0, abs(x0)):
            return None
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            break
    return complex(x)


def _is_multiple_root(c: np.ndarray, x: complex, m: int, tol: float = 1e-11) -> bool:
    """Taylor coefficients 0..m-1 of p at x are negligible relative to their scale."""
    absc = np.abs(c)
    for k in range(m):
        dk = P.polyder(c, k) if k else c
        scale_k = P.polyval(abs(x), P.polyder(absc, k) if k else absc)
        if scale_k == 0:
            continue
        if abs(P.polyval(x, dk)) > tol * scale_k:
            return False
    return True


def _assemble_multiplicities(c: np.ndarray, roots: np.ndarray, cluster_radius: float) -> list[tuple[complex, int]]:
    cents = []
    for g in _cluster(roots, cluster_radius):
        x, m = complex(np.mean(roots[g])), len(g)
        if m > 1:
            x = _refine_multiple(c, x, m, cluster_radius) or x
        cents.append((x, m))
    # merge the closest pair of clusters while the derivative test confirms it
    while len(cents) > 1:
        best = None
        for i in range(len(cents)):
            for j in range(i + 1, len(cents)):
                dist = abs(cents[i][0] - cents[j][0])
                if dist <= MERGE_RADIUS * max(1.0, abs(cents[i][0])) and (best is None or dist < best[0]):
                    best = (dist, i, j)
        if best is None:
            break
        _, i, j = best
        (xi, mi), (xj, mj) = cents[i], cents[j]
        m = mi + mj
        x = _refine_multiple(c, (xi * mi + xj * mj) / m, m, MERGE_RADIUS)
        if x is None or not _is_multiple_root(c, x, m):
            break
        cents = [cc for k, cc in enumerate(cents) if k not in (i, j)] + [(x, m)]
    return cents


def find_roots(p: Poly, cluster_radius: float = CLUSTER_RADIUS, max_iter: int = MAX_ITER) -> list[tuple[complex, int]]:
    """All roots of ``p`` with multiplicities, sorted by (real, imag).

    Raises :class:`NonConvergence` when neither Aberth iteration nor the
    companion-matrix fallback yields roots with small residual.
    """
    c = p.coeffs
    if p.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    # exact zero roots are deflated first
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    c = c[k0:]
    found: list[tuple[complex, int]] = []
    if c.size > 1:
        try:
            roots = _aberth(c, max_iter)
        except NonConvergence:
            roots = np.roots(c[::-1])
            bound = P.polyval(np.abs(roots), np.abs(c))
            if np.any(np.abs(P.polyval(roots, c)) > 1e-9 * bound):
                raise
        found = _assemble_multiplicities(c, roots, cluster_radius)
    if k0:
        found.append((0j, k0))
    found.sort(key=lambda r: (round(r[0].real, 9), round(r[0].imag, 9)))
    return found


def poly_from_roots(roots: list[tuple[complex, int]], lead: complex = 1.0) -> Poly:
    flat = [r for r, m in roots for _ in range(m)]
    return Poly(P.polyfromroots(flat) * lead) if flat else Poly([lead])


# ---------------------------------------------------------------------------
# rational maps


@dataclass(frozen=True)
class RamificationSet:
    points: list[tuple[complex, int]]
    at_infinity: int = 0

    @property
    def total(self) -> int:
        return sum(m for _, m in self.points) + self.at_infinity


@dataclass(frozen=True)
class RationalMap:
    """f = f2 / f1 with coprime numerator and denominator."""

    f1: Poly
    f2: Poly
    check_coprime: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.f1.is_zero():
            raise DegenerateMap("denominator is identically zero")
        if self.check_coprime and self.f1.degree < 1 and self.f2.degree < 1:
            raise DegenerateMap("both polynomials are constant")
        if self.check_coprime and self.f1.degree >= 1 and self.f2.degree >= 1:
            r1 = find_roots(self.f1)
            r2 = find_roots(self.f2)
            for a, _ in r1:
                for b, _ in r2:
                    if abs(a - b) <= COPRIME_TOL * max(1.0, abs(a)):
                        raise DegenerateMap(f"f1 and f2 share the root {a}")

    @classmethod
    def from_coeffs(cls, f1, f2) -> RationalMap:
        return cls(Poly(f1), Poly(f2))

    @classmethod
    def polynomial(cls, coeffs) -> RationalMap:
        return cls(Poly([1.0]), Poly(coeffs))

    @property
    def degree(self) -> int:
        return max(self.f1.degree, self.f2.degree)

    def __call__(self, z):
        return self.eval_jet(z).v

    def eval_jet(self, z) -> Jet2:
        """Jet of f2/f1; raises :class:`PoleAtPoint` where |f1| is negligible."""
        z = np.asarray(z, complex)
        q = self.f1.jet(z)
        scale = P.polyval(np.abs(z), np.abs(self.f1.coeffs))
        if np.any(np.abs(q.v) < POLE_TOL * scale):
            raise PoleAtPoint("rational map evaluated at a pole")
        return self.f2.jet(z) / q

    def derivative(self) -> RationalMap:
        """f' = W / f1^2 as a (not necessarily reduced) rational map."""
        return RationalMap(self.f1 * self.f1, wronskian(self), check_coprime=False)

    def rescaled(self, s: float) -> RationalMap:
        """g(w) = f(s w) / s."""
        return RationalMap(self.f1.scaled_argument(s) * s, self.f2.scaled_argument(s), check_coprime=False)

    def chart_flip(self, k: float = 1.0) -> RationalMap:
        """Map in the opposite charts u = 1/(k z), U = 1/(k f) of source and target.

        ``k = 1`` is the usual sphere chart change; ``k = n`` keeps the
        normalised metric 4|dw|^2/(1 + n|w|^2)^2 invariant.
        """
        d = self.degree
        # (k u)^d f_i(1/(k u)) has coefficients a_j k^(d-j) u^(d-j)
        powers = float(k) ** np.arange(d + 1)
        p1 = self.f1.padded(d)[::-1] * powers
        p2 = self.f2.padded(d)[::-1] * powers
        return RationalMap(Poly(p2) * k, Poly(p1), check_coprime=False)

    def poles(self) -> list[tuple[complex, int]]:
        return find_roots(self.f1) if self.f1.degree >= 1 else []


def wronskian(f: RationalMap) -> Poly:
    """f1 f2' - f2 f1'; its roots are the finite ramification points."""
    return f.f1 * f.f2.derivative() - f.f2 * f.f1.derivative()


def ramification_points(f: RationalMap) -> RamificationSet:
    w = wronskian(f)
    if w.is_zero():
        raise DegenerateMap("wronskian vanishes identically (constant map)")
    pts = find_roots(w) if w.degree >= 1 else []
    deficit = 2 * f.degree - 2 - max(w.degree, 0)
    return RamificationSet(pts, at_infinity=deficit)


def homogenise(p: Poly, degree: int):
    """Coefficients a_j of z1^(d-j) z2^j for z1^d p(z2/z1)."""
    return p.padded(degree)
