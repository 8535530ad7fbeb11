from __future__ import annotations

import numpy as np
import pytest

from nvortex.errors import ConstraintViolation, OnRemovedFibre
from nvortex.geometry import Mode, SurfaceSpec
from nvortex.lift import (
    BundleMapU,
    FiberedPoint,
    GroupPoint,
    VortexLift,
    apply_field,
    commutator_residuals,
    conjugation_identity_residual,
    consistency_residuals,
    equivariance_residual,
    fibre_derivative,
    frame_at,
    frame_fields,
    gauge_connection_curvature,
    hopf_projection,
    maurer_cartan,
    pullback_identities,
    section,
)
from nvortex.rational import RationalMap
from nvortex.vortex import VortexFamily, VortexSolution

CUBIC = RationalMap.polynomial([0, -3, 0, 1])
BASE = np.array([0.21 + 0.13j, -0.32 + 0.05j, 0.08 - 0.27j])
ANGLES = np.array([0.3, 2.0, 5.1])


def _points(C, spec=None, shrink=1.0):
    spec = spec or SurfaceSpec(C)
    return section(spec, BASE * shrink).rotate(ANGLES)


@pytest.mark.parametrize("C", [-1, 0, 1])
def test_frame_matches_fibre_rotation(C):
    # d/dtheta of h diag(e^{-i theta/2}, e^{i theta/2}) is X0 at h
    spec = SurfaceSpec(C)
    fp = FiberedPoint(BASE, ANGLES, spec)
    g = fp.point()
    d1 = fibre_derivative(lambda p: p.z1, fp)
    d2 = fibre_derivative(lambda p: p.z2, fp)
    x0 = frame_at(g)["X0"]
    assert np.allclose(d1, x0[0], atol=1e-9) and np.allclose(d2, x0[1], atol=1e-9)


@pytest.mark.parametrize("C", [-1, 0, 1])
def test_maurer_cartan_table(C):
    g = _points(C)
    fr = frame_at(g)
    expected = {"X0": (0, 1, 0), "Xp": (0, 0, 2), "Xm": (2, 0, 0)}
    for k, exp in expected.items():
        got = maurer_cartan(g, fr[k])
        for a, b in zip(got, exp):
            assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("C", [-1, 1])
def test_maurer_cartan_against_matrix_form(C):
    # h^{-1} dh for a real velocity must be traceless with the expected entries
    g = _points(C)
    v1, v2 = 0.4 + 0.1j, -0.2 + 0.3j
    # project onto the tangent space Re(conj(z1) v1 + C conj(z2) v2) = 0
    w = np.real(np.conj(g.z1) * v1 + C * np.conj(g.z2) * v2)
    v1, v2 = v1 - w * g.z1, v2 - w * g.z2
    dh = np.empty(g.z1.shape + (2, 2), complex)
    dh[..., 0, 0], dh[..., 0, 1] = v1, -C * np.conj(v2)
    dh[..., 1, 0], dh[..., 1, 1] = v2, np.conj(v1)
    m = np.linalg.solve(g.matrix(), dh)
    sig, sig0, sigb = maurer_cartan(g, (v1, v2))
    assert np.allclose(np.trace(m, axis1=-2, axis2=-1), 0, atol=1e-12)
    assert np.allclose(m[..., 0, 0], -0.5j * sig0, atol=1e-12)
    assert np.allclose(m[..., 1, 0], -0.5j * sig, atol=1e-12)
    assert np.allclose(sigb, np.conj(sig), atol=1e-12)


def test_tangent_must_stay_on_group():
    g = _points(1)
    with pytest.raises(ConstraintViolation):
        maurer_cartan(g, (g.z1, g.z2))


@pytest.mark.parametrize("C", [-1, 0, 1])
def test_commutators(C):
    g = _points(C)
    z1, z2, zb1, zb2 = g.jets()
    f = z1 * z1 * zb2 + z2 * zb1 * 3.0 + zb2 * zb2
    for v in commutator_residuals(f, g).values():
        assert np.max(np.abs(v)) < 1e-12


def test_group_point_constraint():
    with pytest.raises(ConstraintViolation):
        GroupPoint(np.array([1.0]), np.array([0.5]), 1)


@pytest.mark.parametrize("C", [-1, 0, 1])
@pytest.mark.parametrize("mode", list(Mode))
def test_section_projects_back(C, mode):
    spec = SurfaceSpec(C, mode, 2.0)
    z = BASE / 2
    assert np.allclose(hopf_projection(section(spec, z), spec), z, atol=1e-14)
    res = pullback_identities(spec, z)
    assert max(float(np.max(v)) for v in res.values()) < 1e-10


def test_projection_undefined_on_removed_fibre():
    with pytest.raises(OnRemovedFibre):
        hopf_projection(GroupPoint(np.array([0j]), np.array([1 + 0j]), 1))


FAMS = [(-1, -1, 1.0), (1, 1, 1.0), (1, 1, 2.0), (-1, -1, 2.0), (0, 1, 1.5), (-1, 1, 0.5)]


def _sol(c0, c2n, n, mode=Mode.FIXED):
    return VortexSolution(VortexFamily(c0, c2n, n, mode), CUBIC)


@pytest.mark.parametrize("fam", FAMS)
def test_equivariance(fam):
    sol = _sol(*fam)
    U = BundleMapU.from_solution(sol)
    assert np.max(equivariance_residual(U, CUBIC, _points(fam[0]))) < 1e-12


@pytest.mark.parametrize("fam", FAMS)
@pytest.mark.parametrize("mode", list(Mode))
def test_upstairs_vortex_equations(fam, mode):
    sol = _sol(*fam, mode)
    lift = VortexLift.from_solution(sol)
    # stay inside the image chart of the hyperbolic target
    g = _points(fam[0], sol.family.source, 0.5)
    for k, v in lift.residuals(g).items():
        assert np.max(np.abs(v)) < 1e-9, k
    for v in gauge_connection_curvature(lift.U, g, sol.n).values():
        assert np.max(v) < 1e-9


@pytest.mark.parametrize("fam", FAMS)
@pytest.mark.parametrize("mode", list(Mode))
def test_section_pullback_reproduces_surface_fields(fam, mode):
    sol = _sol(*fam, mode)
    z = BASE / (2 * np.sqrt(sol.n))
    for v in consistency_residuals(sol, z).values():
        assert np.max(v) < 1e-9
    assert np.max(conjugation_identity_residual(sol, z)) < 1e-9


@pytest.mark.parametrize("fam", FAMS)
def test_fibre_derivative_of_higgs_field(fam):
    sol = _sol(*fam)
    lift = VortexLift.from_solution(sol)
    fp = FiberedPoint(BASE, ANGLES, sol.family.source)
    fd = fibre_derivative(lambda p: lift.configuration(p).phi_n.v, fp)
    g = fp.point()
    exact = apply_field(frame_fields(*g.jets(), g.C)["X0"], lift.configuration(g).phi_n).v
    assert np.max(np.abs(fd - exact)) < 1e-7
    # X0 Phi^n = -i n A0 Phi^n
    assert np.allclose(fd, -1j * sol.n * lift.configuration(g).A0.v * lift.configuration(g).phi_n.v, atol=1e-7)
