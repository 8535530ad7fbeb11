from __future__ import annotations

import numpy as np
import pytest

from nvortex.geometry import (
    Mode,
    SurfaceSpec,
    gauss_curvature,
    normalised_consistency,
    structure_residual,
)
from nvortex.vortex import disk_grid


def _grid(spec: SurfaceSpec) -> np.ndarray:
    r = 0.9 / np.sqrt(-spec.kappa) if spec.kappa < 0 else 2.0
    return disk_grid(32, r)


@pytest.mark.parametrize("c", [-1, 0, 1])
@pytest.mark.parametrize("n", [1.0, 2.0, 3.5])
@pytest.mark.parametrize("mode", list(Mode))
def test_structure_and_gauss(c, n, mode):
    spec = SurfaceSpec(c, mode, n)
    z = _grid(spec)
    assert np.max(np.abs(structure_residual(spec, z).density())) < 1e-10
    expected = c * (n if mode is Mode.NORMALISED else 1.0)
    assert np.max(np.abs(gauss_curvature(spec, z) - expected)) < 1e-9


@pytest.mark.parametrize("c", [-1, 0, 1])
@pytest.mark.parametrize("n", [1.0, 2.0, 3.5])
def test_normalised_is_rescaled_fixed(c, n):
    spec = SurfaceSpec(c, Mode.NORMALISED, n)
    res = normalised_consistency(c, n, _grid(spec))
    assert res and max(float(np.max(np.abs(v))) for v in res.values()) < 1e-12


def test_sphere_area_is_four_pi():
    from scipy import integrate

    from nvortex.geometry import area_density

    spec = SurfaceSpec(1)
    val, _ = integrate.quad(lambda r: 2 * np.pi * r * float(area_density(spec, np.array([r + 0j]))[0]), 0, np.inf)
    assert val == pytest.approx(4 * np.pi, rel=1e-9)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SurfaceSpec(2)
    with pytest.raises(ValueError):
        SurfaceSpec(1, Mode.FIXED, 0.0)
