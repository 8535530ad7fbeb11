"""Verification campaigns: run the configured checks and assemble a report."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .cartan import curvature, decomposition, pullback_ahat
from .config import CaseConfig
from .errors import VortexError
from .geometry import Mode, area_density, gauss_curvature, normalised_consistency, structure_residual
from .jets import Jet2, exterior_d
from .lift import (
    FRAME,
    BundleMapU,
    FiberedPoint,
    apply_field,
    frame_fields,
    VortexLift,
    bundle_map,
    configuration_residuals,
    conjugation_identity_residual,
    consistency_residuals,
    fibre_derivative,
    frame_at,
    gauge_connection_curvature,
    hopf_projection,
    maurer_cartan,
    pullback_identities,
    section,
    vortex_configuration,
)
from .vortex import (
    QuadratureConfig,
    VortexFamily,
    VortexSolution,
    default_radius,
    disk_grid,
    local_windings,
    residual_selfdual,
    residual_vortex2,
    winding_number,
)

TIMESTAMP_KEY = "timestamp"


class CheckResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    max_residual: float
    mean_residual: float
    points_evaluated: int
    excluded_points: int
    tolerance: float
    passed: bool = Field(alias="pass")
    error: Optional[str] = None


class VortexWinding(BaseModel):
    location: list[float]
    multiplicity: int
    value: float
    expected: float


class WindingResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    mode: str
    value: float
    nearest_rational_expectation: float
    delta: float
    tolerance: float
    passed: bool = Field(alias="pass")
    vortices: list[VortexWinding] = []
    error: Optional[str] = None


class Provenance(BaseModel):
    config_hash: str
    tool_version: str
    timestamp: str


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    case: str
    checks: list[CheckResult]
    winding: Optional[WindingResult] = None
    passed: bool = Field(alias="pass")
    provenance: Provenance

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="python", by_alias=True), sort_keys=True, indent=2) + "\n"


def strip_timestamp(report: dict) -> dict:
    out = json.loads(json.dumps(report))
    out.get("provenance", {}).pop(TIMESTAMP_KEY, None)
    return out


# --- helpers --------------------------------------------------------------------


def build_solution(cfg: CaseConfig, gauge: Callable[[Jet2], Jet2] | None = None) -> VortexSolution:
    fam = VortexFamily(cfg.C0, cfg.C2n, cfg.n, cfg.mode)
    return VortexSolution(fam, cfg.rational_map(), exclusion_radius=cfg.exclusion_radius, gauge=gauge)


def _chart_scale(sol: VortexSolution) -> float:
    return sol.n if sol.family.mode is Mode.NORMALISED else 1.0


def chart_grids(cfg: CaseConfig, sol: VortexSolution, resolution: int | None = None) -> list[tuple[VortexSolution, np.ndarray]]:
    """(solution in chart, all grid points) pairs; two entries on the two-chart sphere."""
    res = resolution or cfg.grid.resolution
    if cfg.grid.kind == "two_chart_sphere":
        r = 1.0 / math.sqrt(_chart_scale(sol))
        return [(sol, disk_grid(res, r)), (sol.chart_flipped(), disk_grid(res, r))]
    radius = cfg.grid.radius or default_radius(sol.family)
    return [(sol, disk_grid(res, radius))]


def _result(name: str, values, evaluated: int, excluded: int, tol: float, error: str | None = None) -> CheckResult:
    if error is not None or evaluated == 0:
        return CheckResult(
            name=name, max_residual=math.inf, mean_residual=math.inf, points_evaluated=evaluated,
            excluded_points=excluded, tolerance=tol, passed=False, error=error or "no points evaluated",
        )
    v = np.abs(np.concatenate([np.ravel(x) for x in values]))
    mx = float(np.max(v))
    return CheckResult(
        name=name, max_residual=mx, mean_residual=float(np.mean(v)), points_evaluated=evaluated,
        excluded_points=excluded, tolerance=tol, passed=bool(mx < tol),
    )


class _Sweep:
    """Valid points per chart, with counts."""

    def __init__(self, charts):
        self.items = []
        self.evaluated = 0
        self.excluded = 0
        for sol, z in charts:
            mask = sol.valid(z)
            self.items.append((sol, z[mask]))
            self.evaluated += int(mask.sum())
            self.excluded += int((~mask).sum())

    def collect(self, fn) -> list[np.ndarray]:
        return [fn(sol, z) for sol, z in self.items if z.size]


def _guard(name, tol, sweep, fn) -> CheckResult:
    try:
        values = sweep.collect(fn)
    except VortexError as exc:
        return _result(name, [], sweep.evaluated, sweep.excluded, tol, error=f"{type(exc).__name__}: {exc}")
    return _result(name, values, sweep.evaluated, sweep.excluded, tol)


# --- checks -----------------------------------------------------------------------


def check_geometry(cfg: CaseConfig, sol: VortexSolution, charts) -> list[CheckResult]:
    tol = cfg.tolerances.analytic
    out = []
    for label, spec in (("source", sol.family.source), ("target", sol.family.target)):
        pts, dropped = [], 0
        for _, z in charts:
            ok = 1.0 + spec.kappa * np.abs(z) ** 2 > cfg.exclusion_radius
            pts.append(z[ok])
            dropped += int((~ok).sum())
        z = np.concatenate(pts)
        w = z if spec.mode is Mode.NORMALISED else z / math.sqrt(spec.n)
        try:
            struct = np.abs(structure_residual(spec, z).c)
            gauss = np.abs(gauss_curvature(spec, z) - spec.kappa)
            cons = normalised_consistency(spec.curvature_sign, spec.n, w)
        except VortexError as exc:
            out.append(_result(f"geometry.{label}", [], z.size, dropped, tol, error=str(exc)))
            continue
        out.append(_result(f"geometry.{label}.structure", [struct], z.size, dropped, tol))
        out.append(_result(f"geometry.{label}.gauss", [gauss], z.size, dropped, tol))
        out.append(_result(f"geometry.{label}.normalised_pullback", [cons["coframe"], cons["spin_connection"]], z.size, dropped, tol))
    return out


def check_vortex(cfg: CaseConfig, sweep: _Sweep) -> list[CheckResult]:
    tol = cfg.tolerances.analytic
    return [
        _guard("vortex.selfdual", tol, sweep, lambda s, z: residual_selfdual(s, z)),
        _guard("vortex.curvature", tol, sweep, lambda s, z: residual_vortex2(s, z)),
    ]


def check_flatness(cfg: CaseConfig, sweep: _Sweep) -> list[CheckResult]:
    tol = cfg.tolerances.analytic

    def dec(s, z):
        d = decomposition(s, z)
        return np.maximum(np.abs(d["t0"] - d["t0_expected"]), np.abs(d["tm"] - d["tm_expected"]))

    return [
        _guard("flatness.curvature", tol, sweep, lambda s, z: curvature(pullback_ahat(s, z)).magnitude()),
        _guard("flatness.decomposition", cfg.tolerances.decomposition, sweep, dec),
        _guard("flatness.reality", tol, sweep, lambda s, z: curvature(pullback_ahat(s, z)).reality_residual()),
    ]


def check_winding(cfg: CaseConfig, sol: VortexSolution) -> WindingResult:
    tol = cfg.tolerances.quadrature
    d = sol.map.degree
    try:
        if sol.family.C0 == 1:
            value = winding_number(sol, QuadratureConfig())
            expected = (2 * d - 2) / sol.n
            delta = abs(value - expected)
            return WindingResult(
                mode="global", value=value, nearest_rational_expectation=expected,
                delta=delta, tolerance=tol, passed=bool(delta < tol),
            )
        loc = local_windings(sol, QuadratureConfig())
    except VortexError as exc:
        return WindingResult(
            mode="global" if sol.family.C0 == 1 else "local", value=math.nan,
            nearest_rational_expectation=math.nan, delta=math.inf, tolerance=tol, passed=False,
            error=f"{type(exc).__name__}: {exc}",
        )
    vortices = [
        VortexWinding(location=[lw.location.real, lw.location.imag], multiplicity=lw.multiplicity,
                      value=lw.value, expected=lw.multiplicity / sol.n)
        for lw in loc
    ]
    value = float(sum(v.value for v in vortices))
    expected = float(sum(v.expected for v in vortices))
    worst = max((abs(v.value - v.expected) for v in vortices), default=0.0)
    return WindingResult(
        mode="local", value=value, nearest_rational_expectation=expected, delta=abs(value - expected),
        tolerance=tol, passed=bool(worst < tol and abs(value - expected) < tol), vortices=vortices,
    )


def _fibre_sweep(cfg: CaseConfig, sol: VortexSolution):
    """Base points (valid, in the source chart) and their group lifts at several fibre angles."""
    radius = cfg.grid.radius or default_radius(sol.family)
    if cfg.grid.kind == "two_chart_sphere":
        radius = 1.0 / math.sqrt(_chart_scale(sol))
    z = disk_grid(cfg.grid.lift_resolution, radius)
    mask = sol.valid(z)
    base = z[mask]
    k = cfg.grid.fibre_angles
    angles = 4 * np.pi * np.arange(k) / k + 0.1
    zz = np.repeat(base, k)
    th = np.tile(angles, base.size)
    g = section(sol.family.source, zz).rotate(th)
    return base, zz, th, g, int((~mask).sum()) * k


def check_lift(cfg: CaseConfig, sol: VortexSolution) -> list[CheckResult]:
    tol_a, tol_fd = cfg.tolerances.analytic, cfg.tolerances.fibre_fd
    base, zz, th, g, excluded = _fibre_sweep(cfg, sol)
    nb, ng = base.size, zz.size
    ex_b = excluded // max(cfg.grid.fibre_angles, 1)
    out = []
    U = BundleMapU.from_solution(sol)
    src = sol.family.source

    def run(name, tol, count, ex, fn):
        try:
            vals = fn()
        except VortexError as exc:
            out.append(_result(name, [], count, ex, tol, error=f"{type(exc).__name__}: {exc}"))
            return
        out.append(_result(name, vals, count, ex, tol))

    run("lift.pullback_identities", tol_a, nb, ex_b, lambda: list(pullback_identities(src, base).values()))

    def mc_table():
        fr = frame_at(g)
        expected = {"X0": (0, 1, 0), "Xp": (0, 0, 2), "Xm": (2, 0, 0)}
        res = []
        for k in FRAME:
            got = maurer_cartan(g, fr[k])
            res += [np.abs(a - b) for a, b in zip(got, expected[k])]
        return res

    run("lift.maurer_cartan_table", tol_a, ng, excluded, mc_table)

    def equivariance():
        fixed = sol.fixed_equivalent().map
        img = bundle_map(U, g)
        return [np.abs(hopf_projection(img) - fixed(hopf_projection(g)))]

    run("lift.equivariance", tol_a, ng, excluded, equivariance)
    run("lift.configuration", tol_a, ng, excluded, lambda: list(configuration_residuals(U, g, sol.n).values()))
    run("lift.consistency", tol_a, nb, ex_b, lambda: list(consistency_residuals(sol, base).values()))
    run("lift.conjugation_identity", tol_fd, nb, ex_b, lambda: [conjugation_identity_residual(sol, base)])
    run("lift.flat_connection", tol_fd, ng, excluded, lambda: list(gauge_connection_curvature(U, g, sol.n).values()))

    def fibre_fd():
        def phi_n(p):
            return vortex_configuration(U, p, sol.n).phi_n.v

        fp = FiberedPoint(zz, th, src)
        fd = fibre_derivative(phi_n, fp)
        zs = g.jets()
        cfg_up = vortex_configuration(U, g, sol.n)
        exact = apply_field(frame_fields(*zs, g.C)["X0"], cfg_up.phi_n).v
        return [np.abs(fd - exact)]

    run("lift.fibre_derivative", tol_fd, ng, excluded, fibre_fd)
    return out


def _r3_samples(C0: int):
    from .dirac import R3Point

    t = np.linspace(-0.6, 0.6, 7)
    x0, x1, x2 = np.meshgrid(t, t, t, indexing="ij")
    p = R3Point(x0.ravel(), x1.ravel(), x2.ravel(), C0)
    ok = p.in_region()
    return R3Point(p.x0[ok], p.x1[ok], p.x2[ok], C0), int((~ok).sum())


def check_dirac(cfg: CaseConfig, sol: VortexSolution) -> list[CheckResult]:
    from .dirac import curvature_identity_residual, dirac_residual, g_map, h_map, vortex_magnetic_mode

    tol_a, tol_fd = cfg.tolerances.analytic, cfg.tolerances.fibre_fd
    base, zz, th, g, excluded = _fibre_sweep(cfg, sol)
    out = []
    try:
        mode = vortex_magnetic_mode(VortexLift.from_solution(sol))
        r0, rp = dirac_residual(mode, g)
        out.append(_result("dirac.components", [r0, rp], zz.size, excluded, tol_fd))
        out.append(_result("dirac.curvature_identity", [curvature_identity_residual(mode, g)], zz.size, excluded, tol_fd))
    except VortexError as exc:
        out.append(_result("dirac.components", [], zz.size, excluded, tol_fd, error=f"{type(exc).__name__}: {exc}"))
    x, dropped = _r3_samples(cfg.C0)
    H, G = h_map(x), g_map(x)
    res = [
        np.abs(H - G @ G).reshape(len(x.x0), -1).max(axis=1),
        np.abs(np.linalg.det(G) - 1),
        np.abs(np.abs(G[..., 0, 0]) ** 2 + cfg.C0 * np.abs(G[..., 1, 0]) ** 2 - 1),
    ]
    out.append(_result("dirac.hg_maps", res, len(x.x0), dropped, tol_a))
    return out


# --- entry points -------------------------------------------------------------------


def run_case(cfg: CaseConfig, checks: list[str] | None = None, gauge: Callable[[Jet2], Jet2] | None = None,
             timestamp: str | None = None) -> Report:
    """Run the configured checks; ``gauge`` re-expresses the surface fields in another gauge."""
    wanted = [c for c in cfg.checks if checks is None or c in checks]
    sol = build_solution(cfg)
    gsol = sol if gauge is None else sol.with_gauge(gauge)
    charts = chart_grids(cfg, gsol)
    results: list[CheckResult] = []
    winding = None
    if "geometry" in wanted:
        results += check_geometry(cfg, gsol, charts)
    if "vortex" in wanted or "flatness" in wanted:
        sweep = _Sweep(charts)
        if "vortex" in wanted:
            results += check_vortex(cfg, sweep)
        if "flatness" in wanted:
            results += check_flatness(cfg, sweep)
    if "winding" in wanted:
        winding = check_winding(cfg, gsol)
    if "lift" in wanted:
        results += check_lift(cfg, sol)
    if "dirac" in wanted:
        results += check_dirac(cfg, sol)
    passed = all(r.passed for r in results) and (winding is None or winding.passed)
    ts = timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return Report(
        case=cfg.name, checks=results, winding=winding, passed=passed,
        provenance=Provenance(config_hash=cfg.digest(), tool_version=__version__, timestamp=ts),
    )


CSV_HEADER = ["re_z", "im_z", "abs_phi_2n", "A_zbar_re", "A_zbar_im", "F_density", "baptista"]


def sample_fields(cfg: CaseConfig, out: str | Path) -> dict:
    """Write field samples on the first chart's grid; returns the sidecar summary.

    ``abs_phi_2n`` is |phi|^{2n}; ``F_density`` is dA against dx dy;
    ``baptista`` is the area density |phi|^{2n} times that of g0.
    """
    sol = build_solution(cfg)
    chart_sol, z = chart_grids(cfg, sol)[0]
    mask = chart_sol.valid(z)
    pts = z[mask]
    out = Path(out)
    rows = []
    if pts.size:
        phi = chart_sol.phi_n(pts).v
        a = chart_sol.gauge_potential(pts)
        _, a_zb = a.values
        fd = np.real(exterior_d(a).density())
        area = area_density(chart_sol.family.source, pts)
        p2 = np.abs(phi) ** 2
        rows = np.column_stack([pts.real, pts.imag, p2, a_zb.real, a_zb.imag, fd, p2 * area])
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([repr(float(v)) for v in r])
    summary = {
        "case": cfg.name,
        "csv": out.name,
        "grid_points": int(z.size),
        "excluded_points": int((~mask).sum()),
        "rows": int(pts.size),
        "config_hash": cfg.digest(),
    }
    out.with_suffix(out.suffix + ".json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return summary


__all__ = [
    "CSV_HEADER",
    "CheckResult",
    "Report",
    "WindingResult",
    "build_solution",
    "chart_grids",
    "run_case",
    "sample_fields",
    "strip_timestamp",
]
