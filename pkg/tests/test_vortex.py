from __future__ import annotations

import numpy as np
import pytest

from conftest import fd_wirtinger
from nvortex.errors import ExcludedRegion, PoleAtPoint, UnsupportedDomain
from nvortex.geometry import Mode
from nvortex.jets import Jet2
from nvortex.rational import RationalMap
from nvortex.vortex import (
    NAMED_FAMILIES,
    GaugePair,
    VortexFamily,
    VortexSolution,
    baptista_factor,
    default_radius,
    disk_grid,
    gauge_transform,
    local_windings,
    residual_selfdual,
    residual_vortex2,
    winding_number,
)

CUBIC = RationalMap.polynomial([0, -3, 0, 1])
SQUARE = RationalMap.polynomial([0, 0, 1])


def _solution(c0, c2n, n=1.0, mode=Mode.FIXED, f=CUBIC):
    return VortexSolution(VortexFamily(c0, c2n, n, mode), f)


def _valid_grid(sol, res=24):
    z = disk_grid(res, default_radius(sol.family))
    return z[sol.valid(z)]


@pytest.mark.parametrize("name", sorted(NAMED_FAMILIES))
@pytest.mark.parametrize("mode", list(Mode))
def test_residuals_vanish(name, mode):
    sol = _solution(*NAMED_FAMILIES[name], 1.0, mode)
    z = _valid_grid(sol)
    assert np.max(np.abs(residual_selfdual(sol, z))) < 1e-9
    assert np.max(np.abs(residual_vortex2(sol, z))) < 1e-9


def test_selfdual_against_finite_differences():
    # d-bar phi_n = i n A_zbar phi_n, checked with plain numpy differences
    sol = _solution(-1, -1, 2.0)
    z = _valid_grid(sol, 12)
    _, dzb = fd_wirtinger(lambda w: sol.phi_n(w, check=False).v, z)
    _, a_zb = sol.gauge_potential(z).values
    lhs = dzb - 1j * sol.n * a_zb * sol.phi_n(z).v
    assert np.max(np.abs(lhs)) < 1e-6


def test_vortex2_against_finite_differences():
    sol = _solution(1, 1, 1.0)
    z = _valid_grid(sol, 12)

    def a_z(w):
        return sol.gauge_potential(w, check=False).values[0]

    def a_zb(w):
        return sol.gauge_potential(w, check=False).values[1]

    # dA = (d_z A_zbar - d_zbar A_z) dz ^ dzbar
    dA = fd_wirtinger(a_zb, z)[0] - fd_wirtinger(a_z, z)[1]
    p2 = np.abs(sol.phi_n(z).v) ** 2
    # kahler form of the sphere: (i/2) * 4 / (1 + |z|^2)^2 dz ^ dzbar
    rhs = (-1 + p2) * 2j / (1 + np.abs(z) ** 2) ** 2
    assert np.max(np.abs(dA - rhs)) < 1e-6


def test_trivial_map_gives_unit_higgs_field():
    sol = _solution(1, 1, 1.0, f=RationalMap.polynomial([0, 1]))
    z = _valid_grid(sol)
    assert np.allclose(np.abs(sol.phi_n(z).v), 1.0, atol=1e-14)
    a, b = sol.gauge_potential(z).values
    assert np.max(np.abs(a)) < 1e-14 and np.max(np.abs(b)) < 1e-14


def test_residuals_detect_perturbation():
    sol = _solution(-1, -1)
    z = _valid_grid(sol, 12)
    base = sol.gauge_pair()
    bumped = GaugePair(lambda w: base.phi_n(w) * 1.01, base.A)
    assert np.max(np.abs(residual_vortex2(sol, z, bumped))) > 1e-4


def test_gauge_potential_is_real():
    sol = _solution(-1, 1, 1.5, Mode.NORMALISED)
    z = _valid_grid(sol)
    a, b = sol.gauge_potential(z).values
    assert np.allclose(a, np.conj(b), atol=1e-15)


def test_gauge_transform_keeps_residuals_zero():
    sol = _solution(0, 1, 2.0)
    z = _valid_grid(sol, 12)
    pair = gauge_transform(sol.gauge_pair(), lambda w: Jet2.coordinate(w).abs2() * 0.7, sol.n)
    assert np.max(np.abs(residual_selfdual(sol, z, pair))) < 1e-9
    assert np.max(np.abs(residual_vortex2(sol, z, pair))) < 1e-9


def test_ramification_points_are_excluded():
    sol = _solution(1, 1)
    with pytest.raises(ExcludedRegion):
        sol.phi_n(np.array([1.0 + 0.001j]))


def test_baptista_factor_rejects_poles():
    sol = _solution(1, 1, f=RationalMap.from_coeffs([0, 1], [1]))
    with pytest.raises(PoleAtPoint):
        baptista_factor(sol, np.array([0j]))


def test_inadmissible_family():
    with pytest.raises(ValueError):
        VortexFamily(1, -1, 1.0)


@pytest.mark.parametrize("d", [2, 3])
def test_global_winding_powers(d):
    sol = _solution(1, 1, f=RationalMap.polynomial([0] * d + [1]))
    assert abs(winding_number(sol) - (2 * d - 2)) < 1e-3


@pytest.mark.parametrize("mode", list(Mode))
def test_global_winding_fractional(mode):
    sol = _solution(1, 1, 2.0, mode, f=SQUARE)
    assert abs(winding_number(sol) - 1.0) < 1e-3


def test_local_windings_sum_to_global():
    sol = _solution(1, 1, 1.5, f=CUBIC)
    local = local_windings(sol)
    assert sum(w.value for w in local) == pytest.approx(winding_number(sol), abs=1e-3)
    for w in local:
        assert w.value == pytest.approx(w.multiplicity / sol.n, abs=1e-4)


def test_global_winding_needs_sphere():
    with pytest.raises(UnsupportedDomain):
        winding_number(_solution(-1, -1))
