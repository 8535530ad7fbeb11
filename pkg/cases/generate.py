"""Write the committed case configs and refresh their golden reports.

    python cases/generate.py            # configs and reports
    python cases/generate.py --configs  # configs only
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
CONFIGS = HERE / "configs"
GOLDEN = HERE / "golden"

FAMILIES_N1 = {
    "taubes": (-1, -1),
    "jackiw_pi": (0, 1),
    "popov": (1, 1),
    "bradlow": (-1, 0),
    "ambjorn_olesen": (-1, 1),
}
FAMILIES_N2 = {"taubes": (-1, -1), "jackiw_pi": (0, 1), "popov": (1, 1), "ambjorn_olesen": (-1, 1)}
MAPS = {"z2": ([1], [0, 0, 1]), "z3m3z": ([1], [0, -3, 0, 1])}
# fixed timestamp so golden files are byte-stable
GOLDEN_TIMESTAMP = "1970-01-01T00:00:00+00:00"


def _fmt(n: float) -> str:
    return str(n).replace(".", "p")


def matrix() -> list[dict]:
    combos = [(name, c, 1.0) for name, c in FAMILIES_N1.items()]
    combos += [(name, c, 2.0) for name, c in FAMILIES_N2.items()]
    combos += [("popov", (1, 1), n) for n in (0.5, 1.5, 3.0)]
    cases = []
    for fam, (c0, c2n), n in combos:
        for map_name, (f1, f2) in MAPS.items():
            for mode in ("fixed", "normalised"):
                cases.append(_case(f"{fam}_n{_fmt(n)}_{map_name}_{mode}", c0, c2n, n, mode, f1, f2))
    # winding quantisation on f = z^3 (f = z^2 is covered above)
    cases.append(_case("popov_n1_z3_fixed", 1, 1, 1.0, "fixed", [1], [0, 0, 0, 1]))
    return cases


def _case(name, c0, c2n, n, mode, f1, f2) -> dict:
    checks = ["geometry", "vortex", "flatness", "winding", "lift"]
    if c0 != 0:
        checks.append("dirac")
    grid = {"kind": "two_chart_sphere" if c0 == 1 else "disk", "resolution": 64}
    return {
        "name": name, "C0": c0, "C2n": c2n, "n": n, "mode": mode,
        "f1_coeffs": f1, "f2_coeffs": f2, "grid": grid, "exclusion_radius": 1e-2, "checks": checks,
    }


def main(argv: list[str]) -> int:
    CONFIGS.mkdir(exist_ok=True)
    GOLDEN.mkdir(exist_ok=True)
    cases = matrix()
    for case in cases:
        (CONFIGS / f"{case['name']}.json").write_text(json.dumps(case, indent=2, sort_keys=True) + "\n")
    if "--configs" in argv:
        return 0
    from nvortex.config import load_config
    from nvortex.runner import run_case

    for case in cases:
        cfg = load_config(CONFIGS / f"{case['name']}.json")
        report = run_case(cfg, timestamp=GOLDEN_TIMESTAMP)
        (GOLDEN / f"{case['name']}.report.json").write_text(report.to_json())
        print(f"{case['name']}: {'pass' if report.passed else 'FAIL'}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
