"""Second-order Wirtinger jets and complex differential forms.

A jet carries the value of a field together with its first and second
partial derivatives with respect to a set of independent complex
variables.  Conjugate coordinates are treated as independent variables,
so for one complex coordinate the variables are ``(z, zbar)`` and the
partials are the Wirtinger derivatives.  Every entry may be a numpy
array; arithmetic broadcasts elementwise, so a whole grid of points is
differentiated in one pass.

Differentiating a jet (:meth:`Jet.partial`) loses one order: the result
is an order-1 jet whose second derivatives are not tracked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularPoint

__all__ = [
    "Jet",
    "Jet2",
    "GroupJet",
    "OneForm",
    "TwoForm",
    "jet_compose",
    "exterior_d",
    "wedge",
    "d_scalar",
]


def _c(x) -> np.ndarray:
    return np.asarray(x, dtype=complex)


def _check_nonzero(v, what: str) -> None:
    if np.any(v == 0):
        raise SingularPoint(f"{what} evaluated at a zero of its argument")


class Jet:
    """Truncated Taylor data of a complex field in ``nvars`` variables.

    ``v`` has the point shape ``S``; ``g`` has shape ``S + (k,)`` and
    ``h`` shape ``S + (k, k)``.  ``order`` is 2 when ``h`` is known and 1
    when only first derivatives are.
    """

    nvars: int = 0
    # index permutation mapping each variable to its conjugate partner
    conj_perm: tuple[int, ...] = ()

    __slots__ = ("v", "g", "h", "order")
    # make numpy defer to the reflected jet operators
    __array_ufunc__ = None

    def __init__(self, v, g=None, h=None, order: int = 2):
        k = self.nvars
        self.v = _c(v)
        shape = self.v.shape
        self.g = np.zeros(shape + (k,), complex) if g is None else _c(g)
        if h is None:
            self.h = np.zeros(shape + (k, k), complex)
        else:
            self.h = _c(h)
        self.order = order

    # construction ------------------------------------------------------
    @classmethod
    def const(cls, c) -> Jet:
        return cls(c)

    @classmethod
    def variable(cls, value, index: int) -> Jet:
        value = _c(value)
        g = np.zeros(value.shape + (cls.nvars,), complex)
        g[..., index] = 1.0
        return cls(value, g)

    def _lift(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise TypeError("cannot combine jets over different variables")
            return other
        return type(self)(other)

    def _new(self, v, g, h, order) -> Jet:
        return type(self)(v, g, h, order)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        return self._new(self.v + o.v, self.g + o.g, self.h + o.h, min(self.order, o.order))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.v, -self.g, -self.h, self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = _c(other)
            return self._new(self.v * c, self.g * c[..., None], self.h * c[..., None, None], self.order)
        o = self._lift(other)
        a, b = self, o
        v = a.v * b.v
        g = a.g * b.v[..., None] + a.v[..., None] * b.g
        h = (
            a.h * b.v[..., None, None]
            + a.g[..., :, None] * b.g[..., None, :]
            + b.g[..., :, None] * a.g[..., None, :]
            + a.v[..., None, None] * b.h
        )
        return self._new(v, g, h, min(a.order, b.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            c = _c(other)
            _check_nonzero(c, "division")
            return self * (1.0 / c)
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, exponent):
        return self.power(exponent)

    # univariate chain rule ---------------------------------------------
    def _chain(self, f0, f1, f2) -> Jet:
        g = f1[..., None] * self.g
        h = f2[..., None, None] * self.g[..., :, None] * self.g[..., None, :] + f1[..., None, None] * self.h
        return self._new(f0, g, h, self.order)

    def reciprocal(self) -> Jet:
        _check_nonzero(self.v, "reciprocal")
        r = 1.0 / self.v
        return self._chain(r, -r * r, 2.0 * r * r * r)

    def power(self, a: float) -> Jet:
        """Principal-branch real power."""
        a = float(a)
        if a == int(a) and a >= 0:
            m = int(a)
            f0 = self.v**m
            f1 = m * self.v ** max(m - 1, 0) if m >= 1 else np.zeros_like(self.v)
            f2 = m * (m - 1) * self.v ** max(m - 2, 0) if m >= 2 else np.zeros_like(self.v)
            return self._chain(f0, _c(f1), _c(f2))
        _check_nonzero(self.v, "power")
        f0 = self.v**a
        return self._chain(f0, a * f0 / self.v, a * (a - 1) * f0 / (self.v * self.v))

    def sqrt(self) -> Jet:
        return self.power(0.5)

    def log(self) -> Jet:
        _check_nonzero(self.v, "log")
        r = 1.0 / self.v
        return self._chain(np.log(self.v), r, -r * r)

    def exp(self) -> Jet:
        e = np.exp(self.v)
        return self._chain(e, e, e)

    def conj(self) -> Jet:
        p = list(self.conj_perm)
        g = np.conj(self.g[..., p])
        h = np.conj(self.h[..., p, :][..., :, p])
        return self._new(np.conj(self.v), g, h, self.order)

    def abs2(self) -> Jet:
        return self * self.conj()

    # differentiation ---------------------------------------------------
    def partial(self, index: int) -> Jet:
        """Jet of the partial derivative along variable ``index`` (order drops to 1)."""
        if self.order < 1:
            raise ValueError("jet carries no derivatives")
        g = self.h[..., index, :] if self.order >= 2 else np.zeros_like(self.g)
        return self._new(self.g[..., index], g, None, max(self.order - 1, 0))

    def take(self, mask) -> Jet:
        """Restrict an array-valued jet to the points selected by ``mask``."""
        return self._new(self.v[mask], self.g[mask], self.h[mask], self.order)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(v={self.v!r}, order={self.order})"


class Jet2(Jet):
    """Jet in one complex coordinate: value plus Wirtinger derivatives."""

    nvars = 2
    conj_perm = (1, 0)
    __slots__ = ()

    @classmethod
    def from_parts(cls, v, dz=0, dzbar=0, dzdzbar=0, dzdz=0, dzbardzbar=0, order=2) -> Jet2:
        v = _c(v)
        shape = np.broadcast_shapes(v.shape, *(np.shape(x) for x in (dz, dzbar, dzdzbar, dzdz, dzbardzbar)))
        v = np.broadcast_to(v, shape)
        g = np.empty(shape + (2,), complex)
        g[..., 0] = dz
        g[..., 1] = dzbar
        h = np.empty(shape + (2, 2), complex)
        h[..., 0, 0] = dzdz
        h[..., 0, 1] = dzdzbar
        h[..., 1, 0] = dzdzbar
        h[..., 1, 1] = dzbardzbar
        return cls(v.copy(), g, h, order)

    @classmethod
    def coordinate(cls, z) -> Jet2:
        return cls.variable(z, 0)

    @classmethod
    def conj_coordinate(cls, z) -> Jet2:
        return cls.variable(np.conj(_c(z)), 1)

    @property
    def dz(self):
        return self.g[..., 0]

    @property
    def dzbar(self):
        return self.g[..., 1]

    @property
    def dzdz(self):
        return self.h[..., 0, 0]

    @property
    def dzdzbar(self):
        return self.h[..., 0, 1]

    @property
    def dzbardzbar(self):
        return self.h[..., 1, 1]

    def d_z(self) -> Jet2:
        return self.partial(0)

    def d_zbar(self) -> Jet2:
        return self.partial(1)


class GroupJet(Jet):
    """Jet on C^2 in the independent variables (z1, z2, conj z1, conj z2)."""

    nvars = 4
    conj_perm = (2, 3, 0, 1)
    __slots__ = ()

    @classmethod
    def coordinates(cls, z1, z2) -> tuple[GroupJet, GroupJet, GroupJet, GroupJet]:
        z1, z2 = _c(z1), _c(z2)
        z1, z2 = np.broadcast_arrays(z1, z2)
        return (
            cls.variable(z1, 0),
            cls.variable(z2, 1),
            cls.variable(np.conj(z1), 2),
            cls.variable(np.conj(z2), 3),
        )


_UNARY = {
    "identity": lambda j: j,
    "conj": Jet.conj,
    "log": Jet.log,
    "exp": Jet.exp,
    "sqrt": Jet.sqrt,
    "abs2": Jet.abs2,
    "reciprocal": Jet.reciprocal,
}


def jet_compose(outer: str, inner: Jet, exponent: float | None = None) -> Jet:
    """Apply an elementary function by name, e.g. ``jet_compose("log", j)``.

    ``"pow"`` needs ``exponent``.  Raises :class:`SingularPoint` for
    log/pow/reciprocal at a zero.
    """
    if outer == "pow":
        if exponent is None:
            raise ValueError("pow needs an exponent")
        return inner.power(exponent)
    try:
        fn = _UNARY[outer]
    except KeyError:
        raise ValueError(f"unknown elementary function {outer!r}") from None
    return fn(inner)


def _val(x):
    return x.v if isinstance(x, Jet) else _c(x)


@dataclass(frozen=True)
class OneForm:
    """``a dz + b dzbar``; coefficients are :class:`Jet2` or plain values."""

    a: object
    b: object

    @classmethod
    def zero(cls, like=0.0) -> OneForm:
        z = Jet2(np.zeros(np.shape(like), complex))
        return cls(z, z)

    @property
    def values(self) -> tuple[np.ndarray, np.ndarray]:
        return _val(self.a), _val(self.b)

    def __add__(self, other: OneForm) -> OneForm:
        return OneForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other: OneForm) -> OneForm:
        return OneForm(self.a - other.a, self.b - other.b)

    def __neg__(self) -> OneForm:
        return OneForm(-self.a, -self.b)

    def scale(self, c) -> OneForm:
        """Multiply by a scalar field (jet or value)."""
        return OneForm(c * self.a, c * self.b)

    def conj(self) -> OneForm:
        ca = self.a.conj() if isinstance(self.a, Jet) else np.conj(self.a)
        cb = self.b.conj() if isinstance(self.b, Jet) else np.conj(self.b)
        return OneForm(cb, ca)

    def is_real(self, atol: float = 0.0) -> bool:
        a, b = self.values
        return bool(np.all(np.abs(b - np.conj(a)) <= atol))


@dataclass(frozen=True)
class TwoForm:
    """``c dz ^ dzbar``."""

    c: object

    def __add__(self, other: TwoForm) -> TwoForm:
        return TwoForm(self.c + other.c)

    def __sub__(self, other: TwoForm) -> TwoForm:
        return TwoForm(self.c - other.c)

    def __neg__(self) -> TwoForm:
        return TwoForm(-self.c)

    def scale(self, k) -> TwoForm:
        return TwoForm(k * self.c)

    def conj(self) -> TwoForm:
        # conj(dz ^ dzbar) = -dz ^ dzbar
        return TwoForm(-np.conj(self.c))

    def density(self):
        """Coefficient of dx ^ dy (dz ^ dzbar = -2i dx ^ dy)."""
        return -2j * _c(self.c)


def exterior_d(form: OneForm) -> TwoForm:
    """d(a dz + b dzbar) = (d_z b - d_zbar a) dz ^ dzbar."""
    a, b = form.a, form.b
    da = a.dzbar if isinstance(a, Jet) else 0.0
    db = b.dz if isinstance(b, Jet) else 0.0
    return TwoForm(db - da)


def wedge(p: OneForm, q: OneForm) -> TwoForm:
    pa, pb = p.values
    qa, qb = q.values
    return TwoForm(pa * qb - pb * qa)


def d_scalar(f: Jet2) -> OneForm:
    """Gradient one-form df = f_z dz + f_zbar dzbar with order-1 coefficient jets."""
    return OneForm(f.d_z(), f.d_zbar())
