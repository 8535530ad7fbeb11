from __future__ import annotations

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nvortex.rational import Poly, RationalMap, find_roots, poly_from_roots, ramification_points, wronskian


def _as_multiset(roots):
    return sorted((round(r.real, 6), round(r.imag, 6), m) for r, m in roots)


def test_roots_agree_with_numpy():
    p = Poly(np.array([6, -5, 1, 0.5], complex))
    ours = np.sort_complex(np.array([r for r, m in find_roots(p) for _ in range(m)]))
    ref = np.sort_complex(np.roots(p.coeffs[::-1]))
    assert np.allclose(ours, ref, atol=1e-10)


def test_multiplicities_against_sympy():
    x = sp.symbols("x")
    expr = sp.expand((x - 1) ** 3 * (x + 2) ** 2 * (x - sp.I))
    coeffs = [complex(c) for c in sp.Poly(expr, x).all_coeffs()[::-1]]
    expected = {complex(k): v for k, v in sp.roots(expr, x).items()}
    got = find_roots(Poly(np.array(coeffs)))
    assert len(got) == len(expected)
    for r, m in got:
        match = [v for k, v in expected.items() if abs(k - r) < 1e-6]
        assert match == [m]


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3)),
        min_size=1, max_size=3, unique_by=lambda t: (t[0], t[1]),
    )
)
def test_roots_round_trip(spec):
    roots = [(complex(a, b) / 2, m) for a, b, m in spec]
    got = find_roots(poly_from_roots(roots))
    assert _as_multiset(got) == _as_multiset(roots)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_riemann_hurwitz_for_powers(d):
    f = RationalMap.polynomial([0] * d + [1])
    ram = ramification_points(f)
    # 2d - 2 in total, shared between the origin and infinity
    assert ram.total == 2 * d - 2


def test_wronskian_of_cubic():
    f = RationalMap.polynomial([0, -3, 0, 1])
    w = wronskian(f)
    roots = sorted(r.real for r, _ in find_roots(w))
    assert np.allclose(roots, [-1, 1])


def test_common_factor_rejected():
    with pytest.raises(ValueError):
        RationalMap.from_coeffs([-1, 1], [-1, 0, 1])


def test_eval_jet_is_holomorphic():
    f = RationalMap.from_coeffs([1, 1j], [0, 2, 1])
    z = np.array([0.2 + 0.3j, -0.5j])
    j = f.eval_jet(z)
    assert np.allclose(j.dzbar, 0)
    assert np.allclose(j.v, (2 * z + z**2) / (1 + 1j * z))
